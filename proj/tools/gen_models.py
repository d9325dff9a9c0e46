#!/usr/bin/env python3
# Copyright 2026 The LCP Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Regenerates the bundled model descriptions under models/."""

import argparse
import json
import pathlib


class Builder:
  """Appends layers in order; each layer reads the previous one by default."""

  def __init__(self, name, input_shape):
    self.doc = {"name": name, "input_shape": input_shape, "element_bits": 32,
                "layers": [{"id": "input", "kind": "input", "predecessors": []}]}
    self.last = "input"

  def add(self, layer_id, kind, preds=None, **attrs):
    layer = {"id": layer_id, "kind": kind}
    layer.update(attrs)
    layer["predecessors"] = preds if preds is not None else [self.last]
    self.doc["layers"].append(layer)
    self.last = layer_id
    return layer_id

  def conv(self, layer_id, out, k, s=1, p=0, bias=True, preds=None):
    attrs = {"out_channels": out, "kernel": k, "stride": s, "padding": p}
    if not bias:
      attrs["bias"] = False
    return self.add(layer_id, "convolution", preds, **attrs)

  def dwconv(self, layer_id, k, s=1, p=0, preds=None):
    return self.add(layer_id, "convolution", preds, depthwise=True, kernel=k,
                    stride=s, padding=p, bias=False)

  def relu(self, layer_id, preds=None):
    return self.add(layer_id, "activation", preds, function="relu")

  def pool(self, layer_id, window, stride=None, p=0, mode="max", preds=None):
    attrs = {"window": window, "stride": stride or window, "padding": p,
             "mode": mode}
    return self.add(layer_id, "pooling", preds, **attrs)

  def gpool(self, layer_id, preds=None):
    return self.add(layer_id, "pooling", preds, **{"global": True, "mode": "avg"})

  def fc(self, layer_id, out, preds=None):
    return self.add(layer_id, "fully_connected", preds, out_features=out)

  def bn(self, layer_id, preds=None):
    return self.add(layer_id, "normalization", preds)

  def dropout(self, layer_id, rate=0.5):
    return self.add(layer_id, "dropout", rate=rate)

  def classifier(self, out):
    return self.add("classifier", "classifier_fc", out_features=out)


def toy_fc():
  b = Builder("ToyFC", [16])
  b.fc("fc1", 8)
  b.classifier(4)
  return b.doc


def lenet():
  b = Builder("LeNet", [1, 28, 28])
  b.conv("conv1", 6, 5, p=2)
  b.relu("relu1")
  b.pool("pool1", 2)
  b.conv("conv2", 16, 5)
  b.relu("relu2")
  b.pool("pool2", 2)
  b.conv("conv3", 120, 5)
  b.relu("relu3")
  b.fc("fc4", 84)
  b.relu("relu4")
  b.classifier(10)
  return b.doc


def lenet_fc():
  b = Builder("LeNet-FC", [784])
  b.fc("fc1", 300)
  b.relu("relu1")
  b.fc("fc2", 100)
  b.relu("relu2")
  b.classifier(10)
  return b.doc


def cifarnet():
  b = Builder("CifarNet", [3, 24, 24])
  b.conv("conv1", 64, 5, p=2)
  b.relu("relu1")
  b.pool("pool1", 3, 2)
  b.conv("conv2", 64, 5, p=2)
  b.relu("relu2")
  b.pool("pool2", 3, 2)
  b.fc("fc3", 384)
  b.relu("relu3")
  b.dropout("drop3")
  b.fc("fc4", 192)
  b.relu("relu4")
  b.classifier(100)
  return b.doc


def vgg_s():
  b = Builder("VGG-S", [3, 224, 224])
  b.conv("conv1", 96, 7, s=2)
  b.relu("relu1")
  b.pool("pool1", 3, 3)
  b.conv("conv2", 256, 5, p=1)
  b.relu("relu2")
  b.pool("pool2", 2, 2)
  for i in (3, 4, 5):
    b.conv(f"conv{i}", 512, 3, p=1)
    b.relu(f"relu{i}")
  b.pool("pool5", 3, 3)
  b.fc("fc6", 4096)
  b.relu("relu6")
  b.dropout("drop6")
  b.fc("fc7", 4096)
  b.relu("relu7")
  b.dropout("drop7")
  b.classifier(102)
  return b.doc


def vgg16():
  b = Builder("VGG16", [3, 224, 224])
  cfg = [(64, 2), (128, 2), (256, 3), (512, 3), (512, 3)]
  for stage, (width, reps) in enumerate(cfg, start=1):
    for r in range(1, reps + 1):
      b.conv(f"conv{stage}_{r}", width, 3, p=1)
      b.relu(f"relu{stage}_{r}")
    b.pool(f"pool{stage}", 2)
  b.fc("fc6", 4096)
  b.relu("relu6")
  b.dropout("drop6")
  b.fc("fc7", 4096)
  b.relu("relu7")
  b.dropout("drop7")
  b.classifier(1000)
  return b.doc


def alexnet_v2():
  b = Builder("AlexNet", [3, 224, 224])
  b.conv("conv1", 64, 11, s=4)
  b.relu("relu1")
  b.pool("pool1", 3, 2)
  b.conv("conv2", 192, 5, p=2)
  b.relu("relu2")
  b.pool("pool2", 3, 2)
  b.conv("conv3", 384, 3, p=1)
  b.relu("relu3")
  b.conv("conv4", 384, 3, p=1)
  b.relu("relu4")
  b.conv("conv5", 256, 3, p=1)
  b.relu("relu5")
  b.pool("pool5", 3, 2)
  b.fc("fc6", 4096)
  b.relu("relu6")
  b.dropout("drop6")
  b.fc("fc7", 4096)
  b.relu("relu7")
  b.dropout("drop7")
  b.classifier(1000)
  return b.doc


def _stem(b):
  b.conv("conv1", 64, 7, s=2, p=3, bias=False)
  b.bn("bn1")
  b.relu("relu1")
  b.pool("pool1", 3, 2, p=1)


def resnet18():
  b = Builder("ResNet-18", [3, 224, 224])
  _stem(b)
  width_in = 64
  for stage, width in enumerate([64, 128, 256, 512], start=1):
    for block in range(2):
      name = f"l{stage}b{block}"
      stride = 2 if stage > 1 and block == 0 else 1
      entry = b.last
      b.conv(f"{name}_conv1", width, 3, s=stride, p=1, bias=False)
      b.bn(f"{name}_bn1")
      b.relu(f"{name}_relu1")
      b.conv(f"{name}_conv2", width, 3, p=1, bias=False)
      main = b.bn(f"{name}_bn2")
      shortcut = entry
      if stride != 1 or width_in != width:
        b.conv(f"{name}_down", width, 1, s=stride, bias=False, preds=[entry])
        shortcut = b.bn(f"{name}_down_bn")
      b.add(f"{name}_add", "add", [main, shortcut])
      b.relu(f"{name}_out")
      width_in = width
  b.gpool("avgpool")
  b.classifier(1000)
  return b.doc


def resnet50():
  b = Builder("ResNet-50", [3, 224, 224])
  _stem(b)
  width_in = 64
  for stage, (width, reps) in enumerate(
      [(64, 3), (128, 4), (256, 6), (512, 3)], start=1):
    for block in range(reps):
      name = f"l{stage}b{block}"
      stride = 2 if stage > 1 and block == 0 else 1
      entry = b.last
      b.conv(f"{name}_conv1", width, 1, bias=False)
      b.bn(f"{name}_bn1")
      b.relu(f"{name}_relu1")
      b.conv(f"{name}_conv2", width, 3, s=stride, p=1, bias=False)
      b.bn(f"{name}_bn2")
      b.relu(f"{name}_relu2")
      b.conv(f"{name}_conv3", width * 4, 1, bias=False)
      main = b.bn(f"{name}_bn3")
      shortcut = entry
      if stride != 1 or width_in != width * 4:
        b.conv(f"{name}_down", width * 4, 1, s=stride, bias=False, preds=[entry])
        shortcut = b.bn(f"{name}_down_bn")
      b.add(f"{name}_add", "add", [main, shortcut])
      b.relu(f"{name}_out")
      width_in = width * 4
  b.gpool("avgpool")
  b.classifier(1000)
  return b.doc


def mobilenet_v1():
  b = Builder("MobileNet", [3, 224, 224])
  b.conv("conv0", 32, 3, s=2, p=1, bias=False)
  b.bn("bn0")
  b.relu("relu0")
  cfg = [(64, 1), (128, 2), (128, 1), (256, 2), (256, 1), (512, 2),
         (512, 1), (512, 1), (512, 1), (512, 1), (512, 1), (1024, 2),
         (1024, 1)]
  for i, (width, stride) in enumerate(cfg, start=1):
    b.dwconv(f"dw{i}", 3, s=stride, p=1)
    b.bn(f"dw{i}_bn")
    b.relu(f"dw{i}_relu")
    b.conv(f"pw{i}", width, 1, bias=False)
    b.bn(f"pw{i}_bn")
    b.relu(f"pw{i}_relu")
  b.gpool("avgpool")
  b.classifier(1000)
  return b.doc


MODELS = {
    "toy_fc": toy_fc,
    "lenet": lenet,
    "lenet_fc": lenet_fc,
    "cifarnet": cifarnet,
    "vgg_s": vgg_s,
    "vgg16": vgg16,
    "alexnet_v2": alexnet_v2,
    "resnet18": resnet18,
    "resnet50": resnet50,
    "mobilenet_v1": mobilenet_v1,
}


def main():
  parser = argparse.ArgumentParser(description=__doc__)
  default_out = pathlib.Path(__file__).resolve().parent.parent / "models"
  parser.add_argument("--out", type=pathlib.Path, default=default_out)
  args = parser.parse_args()
  args.out.mkdir(parents=True, exist_ok=True)
  for name, fn in MODELS.items():
    path = args.out / f"{name}.json"
    path.write_text(json.dumps(fn(), indent=2) + "\n")
    print(path)


if __name__ == "__main__":
  main()
