from pathlib import Path

from cliffmat.exactfield import FieldSpec, Mat

GF2 = FieldSpec.prime(2)
GF3 = FieldSpec.prime(3)
GF5 = FieldSpec.prime(5)
QQ = FieldSpec.rational()

INPUTS = Path(__file__).parent.parent / "inputs"


def mats(field, *grids):
    return [Mat(g, field) for g in grids]
