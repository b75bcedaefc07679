"""Render LAT/DDT heatmaps to PPM files you can open in any image viewer."""

import numpy as np

import sboxkit as sk
from sboxkit import heatmap

aes = sk.SBox(8, np.array(sk.AES_SBOX))
weak = sk.random_permutation(np.random.default_rng(5), 256)

# one shared scale makes the two images directly comparable: the stronger
# S-box comes out nearly white, the random one shows saturated streaks
scale = 0
for box in (aes, weak):
    vals = heatmap.heatmap_values(box, "lat")
    scale = max(scale, int(np.abs(vals[1:, 1:]).max()))
print("shared LAT color scale: +/-", scale)

for name, box in [("aes", aes), ("random", weak)]:
    vals = heatmap.heatmap_values(box, "lat")
    rgb, info = heatmap.render_heatmap(vals, heatmap.HeatmapSpec(kind="lat", scale=scale))
    path = f"{name}_lat.ppm"
    heatmap.write_ppm(path, rgb)
    heatmap.write_matrix_csv(f"{name}_lat.csv", vals)
    print(f"{path}: extreme |bias| {info['max_abs']}, {info['marker_count']} marker cells")

# DDT pictures are one-sided (counts are never negative)
vals = heatmap.heatmap_values(aes, "ddt")
rgb, info = heatmap.render_heatmap(vals, heatmap.HeatmapSpec(kind="ddt"))
heatmap.write_ppm("aes_ddt.ppm", rgb)
print(f"aes_ddt.ppm: max count {info['max_abs']}, {info['marker_count']} cells at that count")

# green markers sit on the worst cells; for AES they are spread uniformly,
# which is exactly what you want to see
_, lat_info = heatmap.render_heatmap(
    heatmap.heatmap_values(aes, "lat"), heatmap.HeatmapSpec(kind="lat")
)
rows, cols = np.nonzero(lat_info["markers"])
print("AES LAT marker rows span", rows.min(), "..", rows.max(),
      "and columns", cols.min(), "..", cols.max())
