"""Binary checkpoint files.

Layout: magic ``ZSOC``, version u32, u64 length + UTF-8 JSON header, u32 blob
count, then per blob: u16 name length, name, u64 element count, u8 dtype
flag (0=f32, 1=f64, 2=u8), little-endian data.
"""

from dataclasses import dataclass, field
import json
import struct

import numpy as np
import torch

from zeroshotopt.exceptions import FormatError

MAGIC = b"ZSOC"
VERSION = 1
_DTYPES = {0: "<f4", 1: "<f8", 2: "u1"}
_FLAGS = {np.dtype("<f4"): 0, np.dtype("<f8"): 1, np.dtype("u1"): 2}


@dataclass
class Checkpoint:
    model_config: dict
    tokenizer_config: dict
    train_config: dict
    step: int
    params: dict
    shapes: dict
    optimizer: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


def _blob(name, array):
    array = np.ascontiguousarray(array)
    if array.dtype == np.float32:
        array = array.astype("<f4")
    elif array.dtype == np.float64:
        array = array.astype("<f8")
    elif array.dtype == np.uint8:
        pass
    else:
        raise TypeError(f"unsupported blob dtype {array.dtype} for {name}")
    raw_name = name.encode("utf-8")
    return b"".join([
        struct.pack("<H", len(raw_name)), raw_name,
        struct.pack("<QB", array.size, _FLAGS[array.dtype]),
        array.tobytes(),
    ])


def save_checkpoint(ckpt, path):
    blobs = dict(ckpt.params)
    for key, arr in ckpt.optimizer.items():
        blobs[f"optim.{key}"] = arr
    header = {
        "model_config": ckpt.model_config,
        "tokenizer_config": ckpt.tokenizer_config,
        "train_config": ckpt.train_config,
        "step": ckpt.step,
        "shapes": {k: list(np.shape(v)) for k, v in blobs.items()},
        "extra": ckpt.extra,
    }
    raw = json.dumps(header, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC + struct.pack("<IQ", VERSION, len(raw)))
        fh.write(raw)
        fh.write(struct.pack("<I", len(blobs)))
        for name in sorted(blobs):
            fh.write(_blob(name, blobs[name]))


def _read(fh, n, what):
    offset = fh.tell()
    data = fh.read(n)
    if len(data) != n:
        raise FormatError(f"truncated {what}", offset)
    return data


def load_checkpoint(path):
    with open(path, "rb") as fh:
        head = fh.read(16)
        if len(head) < 16 or head[:4] != MAGIC:
            raise FormatError("not a checkpoint (bad magic)", 0)
        version, n_json = struct.unpack("<IQ", head[4:])
        if version != VERSION:
            raise FormatError(f"unsupported checkpoint version {version}", 4)
        try:
            header = json.loads(_read(fh, n_json, "header").decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise FormatError(f"corrupt checkpoint header: {exc}", 16) from None
        (count,) = struct.unpack("<I", _read(fh, 4, "blob count"))
        blobs = {}
        for _ in range(count):
            (name_len,) = struct.unpack("<H", _read(fh, 2, "blob name length"))
            name = _read(fh, name_len, "blob name").decode("utf-8")
            size, flag = struct.unpack("<QB", _read(fh, 9, "blob header"))
            if flag not in _DTYPES:
                raise FormatError(f"unknown dtype flag {flag} for {name}", fh.tell() - 1)
            dtype = np.dtype(_DTYPES[flag])
            data = np.frombuffer(_read(fh, size * dtype.itemsize, f"blob {name}"), dtype)
            blobs[name] = data.reshape(header["shapes"][name]).copy()
    params = {k: v for k, v in blobs.items() if not k.startswith("optim.")}
    optim = {k[len("optim."):]: v for k, v in blobs.items() if k.startswith("optim.")}
    return Checkpoint(header["model_config"], header["tokenizer_config"], header["train_config"],
                      int(header["step"]), params, header["shapes"], optim, header.get("extra", {}))


def model_state_arrays(model):
    return {k: v.detach().cpu().numpy().copy() for k, v in model.state_dict().items()}


def load_model_state(model, params):
    state = {k: torch.from_numpy(np.array(v)) for k, v in params.items()}
    model.load_state_dict(state)
    return model
