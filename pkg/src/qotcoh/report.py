from dataclasses import asdict, dataclass


@dataclass
class Check:
    """One verified inequality: ``residual <= tolerance``."""

    name: str
    residual: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)

    def to_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        text = f"{mark}  {self.name}: residual {self.residual:.3e} <= {self.tolerance:.1e}"
        return text + (f"  ({self.detail})" if self.detail else "")


class VerificationError(AssertionError):
    def __init__(self, check):
        super().__init__(f"check failed: {check.name} (residual {check.residual:.3e} > {check.tolerance:.1e})")
        self.check = check
