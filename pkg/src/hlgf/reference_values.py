"""Published high-precision values for the isotropic cubic and hypercubic lattices.

Stored as decimal strings exactly as printed.  Each entry is
``(name, d, r, omega, re, im)`` with all couplings equal to one.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class ReferenceValue:
    name: str
    d: int
    r: tuple
    omega: float
    re: str
    im: str

    @property
    def value(self):
        return complex(float(self.re), float(self.im))


def _g(r, omega, re="0", im="0"):
    label = "".join(str(x) for x in r)
    return ReferenceValue(f"G_{label}({omega:g})", len(r), tuple(r), float(omega), re, im)


REFERENCE_VALUES = (
    _g((0, 0, 0), 3, re="0.50546201972"),
    _g((1, 0, 0), 3, re="-0.17212868638"),
    _g((1, 1, 0), 3, re="0.11038286738"),
    _g((1, 1, 1), 3, re="-0.08715670880"),
    _g((2, 0, 0), 3, re="0.08577862908"),
    _g((0, 0, 0), 0, im="-0.89644078878"),
    _g((1, 0, 0), 0, re="0.33333333333"),
    _g((1, 1, 0), 0, im="0.18578752146"),
    _g((1, 1, 1), 0, re="-0.27566444771"),
    _g((2, 0, 0), 0, im="0.15329070292"),
    _g((0, 0, 0, 0), 4, re="0.309866780462"),
    _g((1, 0, 0, 0), 4, re="-0.05986678046"),
    _g((1, 1, 0, 0), 4, re="0.02542940754"),
    _g((1, 1, 1, 0), 4, re="-0.01546809528"),
    _g((1, 1, 1, 1), 4, re="0.01118185767"),
    _g((2, 0, 0, 0), 4, re="0.01649101798"),
    _g((0, 0, 0, 0), 0, im="-0.90272857832"),
    _g((1, 0, 0, 0), 0, re="0.25000000000"),
    _g((1, 1, 0, 0), 0, im="0.15098515279"),
    _g((1, 1, 1, 0), 0, re="-0.10132118364"),
    _g((1, 1, 1, 1), 0, im="-0.20025275758"),
    _g((2, 0, 0, 0), 0, im="-0.00318233840"),
    _g((0, 0, 0, 0), 1, re="0.3726972107993", im="-0.6681496264378"),
    _g((0, 0, 0, 0), 2, re="0.5680714850367", im="-0.3573566432144"),
    _g((0, 0, 0, 0), 3, re="0.4358824699995", im="-0.1063899831047"),
)
