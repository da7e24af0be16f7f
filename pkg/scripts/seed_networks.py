"""
Writes sample networks to networks/ for demos and manual checks.
Includes the two-station cases, a line network and the n+1 cell construction.
"""
import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from sinrmap.geometry import construct_omega_n
from sinrmap.model import Network, Station, dump_network

print("Seeding sample networks...")

out_dir = project_root / "networks"
out_dir.mkdir(exist_ok=True)


def network(stations, dim=2, alpha=2.0, beta=1.0, noise=0.0):
    return Network(
        dim=dim,
        alpha=alpha,
        beta=beta,
        noise=noise,
        stations=tuple(Station(id=f"s{k}", pos=pos, power=power) for k, (pos, power) in enumerate(stations)),
    )


sample_networks = {
    "pair_uniform": network([((0.0, 0.0), 1.0), ((4.0, 0.0), 1.0)]),
    "pair_weak_strong": network([((0.0, 0.0), 1.0), ((4.0, 0.0), 4.0)]),
    "pair_noisy": network([((0.0, 0.0), 1.0), ((4.0, 0.0), 1.0)], noise=1.0),
    "triangle": network(
        [((0.0, 0.0), 2.0), ((3.0, 0.0), 1.0), ((1.0, 2.5), 1.5)], beta=1.5, noise=0.2
    ),
    "line_two_cells": network([((0.0,), 10.0), ((1.0,), 1.0)], dim=1),
    "line_four": network(
        [((0.0,), 4.0), ((2.0,), 1.0), ((3.5,), 6.0), ((7.0,), 2.0)], dim=1, beta=2.0, noise=0.05
    ),
}

omega, report = construct_omega_n(3)
if report.feasible:
    sample_networks["omega_3"] = omega
else:
    print("⊗ omega_3 construction infeasible, skipping...")

for name, net in sample_networks.items():
    path = out_dir / f"{name}.json"
    if path.exists():
        print(f"⊗ {path.name} already exists, skipping...")
        continue
    path.write_text(dump_network(net), encoding="utf-8")
    print(f"✓ Wrote network: {path.name} ({net.n} stations, dim={net.dim})")

print(f"\n✅ Seeding completed! {len(sample_networks)} networks ready in {out_dir}.")
