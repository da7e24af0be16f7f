"""
Removes generated maps and QDS files.
Useful between manual runs; pass --all to drop seeded networks too.
"""
import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from sinrmap.pointloc import MAGIC

print("Cleaning generated outputs...")

patterns = ["*.ppm", "*.svg", "*.qds"]
removed = 0
for pattern in patterns:
    for path in project_root.glob(pattern):
        path.unlink()
        removed += 1

# QDS files written without the .qds suffix still carry the magic bytes
for path in project_root.iterdir():
    if path.is_file() and path.suffix == "":
        with path.open("rb") as fh:
            if fh.read(len(MAGIC)) == MAGIC:
                path.unlink()
                removed += 1

print(f"✓ Deleted {removed} output file(s)")

if "--all" in sys.argv[1:]:
    networks = list((project_root / "networks").glob("*.json"))
    for path in networks:
        path.unlink()
    print(f"✓ Deleted {len(networks)} network file(s)")

print("\n✅ Outputs cleaned successfully!")
