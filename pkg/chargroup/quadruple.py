from dataclasses import dataclass
from functools import cached_property
from math import gcd, pi, prod

from sympy import factorint, isprime

from chargroup.characters import even_primitive_characters
from chargroup.exceptions import CharacterError


def is_squarefree(n):
    return all(k == 1 for k in factorint(n).values())


@dataclass(frozen=True)
class Quadruple:
    """Experiment configuration: prime q, four twisting characters, shift t and twists."""

    q: int
    D: tuple
    chars: tuple
    t: float = 0.0
    ell: tuple = (1, 1)

    def __post_init__(self):
        object.__setattr__(self, "D", tuple(int(d) for d in self.D))
        object.__setattr__(self, "chars", tuple(self.chars))
        object.__setattr__(self, "ell", tuple(int(v) for v in self.ell))
        object.__setattr__(self, "t", float(self.t))
        if not isprime(self.q):
            raise CharacterError(f"q must be prime, got {self.q}.")
        if len(self.D) != 4 or len(self.chars) != 4 or len(self.ell) != 2:
            raise CharacterError("A quadruple needs four moduli, four characters and two twists.")
        if prod(self.D) % self.q == 0:
            raise CharacterError(f"q={self.q} divides D1 D2 D3 D4.")
        for i, d in enumerate(self.D):
            if d < 1 or not is_squarefree(d):
                raise CharacterError(f"D{i + 1}={d} is not square-free.")
            for e in self.D[i + 1 :]:
                if gcd(d, e) != 1:
                    raise CharacterError(f"D values {d} and {e} are not coprime.")
        for i, (d, chi) in enumerate(zip(self.D, self.chars)):
            if chi.modulus != d:
                raise CharacterError(f"chi{i + 1} has modulus {chi.modulus}, expected {d}.")
            if not (chi.is_even and chi.is_primitive):
                raise CharacterError(f"chi{i + 1} = {chi} is not even primitive.")
        if min(self.ell) < 1 or gcd(prod(self.ell), self.q) != 1:
            raise CharacterError(f"Twists {self.ell} must be positive and coprime to q.")

    @classmethod
    def build(cls, q, D, t=0.0, ell=(1, 1), choice=(0, 0, 0, 0)):
        """Pick the `choice[j]`-th even primitive character modulo each D_j."""
        chars = []
        for j, (d, index) in enumerate(zip(D, choice)):
            options = even_primitive_characters(d)
            if not options:
                raise CharacterError(f"No even primitive character modulo D{j + 1}={d}.")
            chars.append(options[index % len(options)])
        return cls(q, tuple(D), tuple(chars), t, tuple(ell))

    @cached_property
    def qhat(self):
        return self.q * prod(self.D) ** 0.25 / pi

    @property
    def ell_tilde(self):
        g = gcd(*self.ell)
        return self.ell[0] // g, self.ell[1] // g

    def replace(self, **changes):
        fields = {"q": self.q, "D": self.D, "chars": self.chars, "t": self.t, "ell": self.ell}
        fields.update(changes)
        return Quadruple(**fields)
