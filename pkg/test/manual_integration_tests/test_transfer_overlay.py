import numpy as np

import curvexfer
from curvexfer.rendering import DrawEngine, SvgCanvas

degree = 3
donor = curvexfer.gen_square_mesh(degree, 3, jitter_seed=7)
target = curvexfer.gen_disc_mesh(degree, 2)

pairing = curvexfer.expanding_front(target, donor)
print(f"{pairing.pair_count} element pairs found with {pairing.probe_count} probes")

canvas = SvgCanvas(width=700, height=700)
engine = DrawEngine(canvas)
engine.draw_mesh(donor, "donor", color=curvexfer.get_setting("svg", "donor_color"))
engine.draw_mesh(target, "target", color=curvexfer.get_setting("svg", "target_color"))

# pieces of one curved target element, each coloured by its donor
target_id = next(index for index, element in enumerate(target) if not element.is_affine())
colors = ["#F2C94C", "#EB5757", "#9B51E0", "#56CCF2", "#6FCF97", "#F2994A"]
for number, donor_id in enumerate(pairing.donors(target_id)):
    for index, polygon in enumerate(pairing.polygons(target_id, donor_id)):
        engine.draw_polygon(polygon, f"piece_{donor_id}_{index}", fill=colors[number % len(colors)])
canvas.save("transfer_overlay.svg")

zeta = lambda x, y: np.exp(x ** 2) + 2.0 * y
donor_field = curvexfer.nodal_interpolant(donor, zeta)
target_field = curvexfer.transfer_field(donor, donor_field, target, pairing)
print(curvexfer.conservation_report(donor, donor_field, target, target_field, pairing))
print(f"relative L2 error {curvexfer.l2_norm(target, target_field, zeta) / curvexfer.l2_norm(target, curvexfer.DiscreteField.zeros(target), zeta):.3e}")
print("wrote transfer_overlay.svg")
