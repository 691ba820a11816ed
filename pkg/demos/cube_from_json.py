"""Load every cube under demos/data and print its Bott-Chern number (or the reason it is rejected)."""

import json
import pathlib

from bottchern import bott_chern as bc
from bottchern import cubes
from bottchern.errors import BottChernError

if __name__ == "__main__":
    for path in sorted((pathlib.Path(__file__).parent / "data").glob("*.json")):
        try:
            F = cubes.cube_from_json(json.loads(path.read_text()))
            F.validate()
            res = bc.bott_chern(F)
        except (json.JSONDecodeError, BottChernError) as exc:
            print(f"{path.name:22s} rejected: {exc}")
            continue
        notes = f"  ({'; '.join(res.notes)})" if res.notes else ""
        print(f"{path.name:22s} n={F.n} emi={cubes.is_emi(F)!s:5s} value={res.value.real:+.10f}{notes}")
