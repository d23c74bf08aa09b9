#!/usr/bin/env python3
"""Regenerate the JPEG fixtures under crates/core/tests/data.

Covers are produced by libjpeg (through Pillow) so the codec is exercised
against an independent encoder. Source rasters:

  lena, baboon   npm packages `lena@1.0.0` and `baboon-image@2.1.0`
  aerial         PyWavelets `pywt/data/aero.npz`
  cameraman      scikit-image `data/camera.png`

Usage: make_fixtures.py SOURCE_DIR OUT_DIR
where SOURCE_DIR holds the unpacked npm packages (`lena-1.0.0/lena.js`,
`baboon-image-2.1.0/baboon.png`).
"""

import base64
import os
import re
import sys

import cv2
import numpy as np
from PIL import Image


def load_lena(src):
    text = open(os.path.join(src, "lena-1.0.0", "lena.js")).read()
    b64 = re.search(r"base64decode\(\s*'([^']+)'", text).group(1)
    rgb = np.frombuffer(base64.b64decode(b64), dtype=np.uint8).reshape(512, 512, 3)
    # scijs ndarrays are indexed (x, y, channel)
    rgb = np.ascontiguousarray(rgb.transpose(1, 0, 2))
    return Image.fromarray(rgb, "RGB").convert("L")


def load_baboon(src):
    return Image.open(os.path.join(src, "baboon-image-2.1.0", "baboon.png")).convert("L")


def load_aerial():
    import pywt

    path = os.path.join(os.path.dirname(pywt.__file__), "data", "aero.npz")
    return Image.fromarray(np.load(path)["data"], "L")


def load_cameraman():
    from skimage import data

    return Image.fromarray(data.camera(), "L")


def write_pgm(img, path):
    w, h = img.size
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(img.tobytes())


def save_pil(img, path, **kw):
    img.save(path, "JPEG", **kw)


def save_cv2(arr, path, params):
    ok, buf = cv2.imencode(".jpg", arr, params)
    assert ok
    open(path, "wb").write(buf.tobytes())


def main():
    src, out = sys.argv[1], sys.argv[2]
    covers = os.path.join(out, "covers")
    originals = os.path.join(out, "originals")
    assorted = os.path.join(out, "assorted")
    rejected = os.path.join(out, "unsupported")
    for d in (covers, originals, assorted, rejected):
        os.makedirs(d, exist_ok=True)

    images = {
        "lena": load_lena(src),
        "baboon": load_baboon(src),
        "aerial": load_aerial(),
        "cameraman": load_cameraman(),
    }
    for name, img in images.items():
        assert img.size == (512, 512)
        write_pgm(img, os.path.join(originals, name + ".pgm"))
        for qf in (30, 50, 70, 90):
            save_pil(img, os.path.join(covers, "%s_q%d.jpg" % (name, qf)), quality=qf)

    from skimage import data

    color_sources = [data.astronaut(), data.chelsea(), data.coffee()]
    rng = np.random.default_rng(7)
    n = 0

    def crop(arr, w, h):
        y = int(rng.integers(0, arr.shape[0] - h))
        x = int(rng.integers(0, arr.shape[1] - w))
        return arr[y : y + h, x : x + w]

    gray_sizes = [(8, 8), (9, 17), (16, 16), (33, 21), (64, 48), (100, 75), (127, 129), (96, 96)]
    gray_src = np.array(images["lena"])
    for i, (w, h) in enumerate(gray_sizes):
        g = Image.fromarray(crop(gray_src, w, h), "L")
        for qf in (25, 75):
            save_pil(g, os.path.join(assorted, "gray_%02d_q%d.jpg" % (i, qf)), quality=qf)
            n += 1
        save_pil(g, os.path.join(assorted, "gray_%02d_opt.jpg" % i), quality=60, optimize=True)
        n += 1

    color_sizes = [(16, 16), (24, 40), (57, 33), (80, 64), (120, 90)]
    for i, (w, h) in enumerate(color_sizes):
        rgb = crop(color_sources[i % 3], w, h)
        c = Image.fromarray(rgb, "RGB")
        for sub in (0, 1, 2):
            save_pil(c, os.path.join(assorted, "color_%02d_s%d.jpg" % (i, sub)), quality=80, subsampling=sub)
            n += 1
        save_pil(c, os.path.join(assorted, "color_%02d_opt.jpg" % i), quality=50, optimize=True)
        n += 1

    for i, (w, h) in enumerate([(40, 40), (65, 31), (128, 64)]):
        bgr = crop(color_sources[(i + 1) % 3], w, h)[:, :, ::-1].copy()
        for rst in (1, 3):
            save_cv2(
                bgr,
                os.path.join(assorted, "cv_color_%02d_rst%d.jpg" % (i, rst)),
                [cv2.IMWRITE_JPEG_QUALITY, 70, cv2.IMWRITE_JPEG_RST_INTERVAL, rst],
            )
            n += 1
        gray = cv2.cvtColor(bgr, cv2.COLOR_BGR2GRAY)
        save_cv2(
            gray,
            os.path.join(assorted, "cv_gray_%02d_rst2.jpg" % i),
            [cv2.IMWRITE_JPEG_QUALITY, 40, cv2.IMWRITE_JPEG_RST_INTERVAL, 2],
        )
        n += 1

    g = Image.fromarray(crop(gray_src, 48, 48), "L")
    save_pil(g, os.path.join(rejected, "progressive_gray.jpg"), quality=60, progressive=True)
    c = Image.fromarray(crop(color_sources[0], 48, 32), "RGB")
    save_pil(c, os.path.join(rejected, "progressive_color.jpg"), quality=60, progressive=True)

    print("covers: 16, assorted: %d" % n)


if __name__ == "__main__":
    main()
