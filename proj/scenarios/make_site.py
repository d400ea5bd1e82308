#!/usr/bin/env python3
"""Generates the shipped site map (site.pgm + site.yaml).

50 m x 50 m at 0.1 m per cell, origin at the lower-left corner. The layout
is a ring of 4 m corridors around two solid blocks, with a middle corridor
joining the east side at the junction. Inner corners along the routes are
post fields: the robot cannot drive through them but can see through.

    python3 make_site.py [--out DIR] [--png preview.png]
"""
import argparse
import pathlib

RES = 0.1
SIZE = 500
T = 0.2  # wall thickness

SOLID = [
    # outer shell
    (0.0, 0.0, 50.0, T),
    (0.0, 50.0 - T, 50.0, 50.0),
    (0.0, 0.0, T, 50.0),
    (50.0 - T, 0.0, 50.0, 50.0),
    # south block; its west end also closes the west corridor off from the bottom one
    (0.0, 4.2, 45.6, 22.0),
    # north block
    (4.2, 26.0, 45.6, 45.6),
]

CARVE = [
    (0.2, 4.2, 4.2, 12.0),      # start bay
    # post-field pockets at route corners
    (4.2, 4.2, 8.2, 8.2),       # start bay -> bottom
    (41.6, 4.2, 45.6, 8.2),     # bottom -> east
    (41.6, 18.0, 45.6, 22.0),   # east -> middle (the junction)
    (41.6, 41.6, 45.6, 45.6),   # east -> top
    (4.2, 41.6, 8.2, 45.6),     # top -> west
    (4.2, 26.0, 8.2, 30.0),     # west -> middle
    # Q1: entered from the east corridor, a baffle hides its west wall
    (39.7, 26.2, 45.4, 31.8),
    (45.3, 26.8, 45.7, 28.8),   # door D1
    # Q2: goal room off the middle corridor
    (30.0, 26.2, 39.5, 31.8),
    (32.0, 25.9, 38.0, 26.3),   # D2 (36..38) with glazing posts to its west
]

WALLS_AFTER = [
    (42.6, 26.2, 42.8, 29.4),   # baffle inside Q1
    (39.5, 28.4, 39.7, 31.8),   # rest of the Q1/Q2 wall
    (39.5, 26.2, 39.7, 28.4),   # R1: present in the BIM, removed on site in some scenarios
]

# (x0, y0, x1, y1) pockets filled with 0.2 m posts at 1 m pitch
POST_FIELDS = [
    (4.2, 4.2, 8.2, 8.2),
    (41.6, 4.2, 45.6, 8.2),
    (41.6, 18.0, 45.6, 22.0),
    (41.6, 41.6, 45.6, 45.6),
    (4.2, 41.6, 8.2, 45.6),
    (4.2, 26.0, 8.2, 30.0),
]
# glazing west of D2: single row of posts on the wall line
POST_ROWS = [
    (32.0, 26.0, 36.0, 26.2),
]


def paint(grid, rect, value):
    x0, y0, x1, y1 = rect
    for iy in range(SIZE):
        cy = (iy + 0.5) * RES
        if not (y0 <= cy <= y1):
            continue
        row = grid[iy]
        for ix in range(SIZE):
            if x0 <= (ix + 0.5) * RES <= x1:
                row[ix] = value


def posts(rect, pitch=1.0, size=0.2):
    x0, y0, x1, y1 = rect
    out = []
    y = y0 + pitch / 2
    while y < y1:
        x = x0 + pitch / 2
        while x < x1:
            out.append((x - size / 2, y - size / 2, x + size / 2, y + size / 2))
            x += pitch
        y += pitch
    return out


def row_posts(rect, pitch=1.0, size=0.2):
    x0, y0, x1, y1 = rect
    cy = (y0 + y1) / 2
    out = []
    x = x0 + pitch / 2
    while x < x1:
        out.append((x - size / 2, cy - size / 2, x + size / 2, cy + size / 2))
        x += pitch
    return out


def rasterize():
    grid = [[0] * SIZE for _ in range(SIZE)]
    for r in SOLID:
        paint(grid, r, 1)
    for r in CARVE:
        paint(grid, r, 0)
    for r in WALLS_AFTER:
        paint(grid, r, 1)
    for f in POST_FIELDS:
        for p in posts(f):
            paint(grid, p, 1)
    for f in POST_ROWS:
        for p in row_posts(f):
            paint(grid, p, 1)
    return grid


def write(out_dir, grid):
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "site.pgm", "wb") as f:
        f.write(b"P5\n# bimsense site\n%d %d\n255\n" % (SIZE, SIZE))
        for iy in reversed(range(SIZE)):
            f.write(bytes(0 if v else 254 for v in grid[iy]))
    (out_dir / "site.yaml").write_text(
        "image: site.pgm\nresolution: 0.1\norigin: [0.0, 0.0, 0.0]\n"
        "negate: 0\noccupied_thresh: 0.65\nfree_thresh: 0.196\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).parent))
    ap.add_argument("--png", help="also write a scaled preview image (needs Pillow)")
    args = ap.parse_args()
    grid = rasterize()
    write(pathlib.Path(args.out), grid)
    if args.png:
        from PIL import Image
        img = Image.open(pathlib.Path(args.out) / "site.pgm")
        img.resize((SIZE * 2, SIZE * 2), Image.NEAREST).save(args.png)


if __name__ == "__main__":
    main()
