import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, lcm, prod

import numpy as np
from sympy import divisors, factorint, primitive_root
from sympy.ntheory.modular import crt

from chargroup.exceptions import CharacterError, ModulusError, NonCoprimeSplit

logger = logging.getLogger(__name__)

MAX_MODULUS = 10**6


@dataclass(frozen=True, eq=False)
class _Component:
    prime_power: int
    orders: tuple
    residues: tuple
    dlogs: tuple  # one array per generator, indexed by residue mod prime_power


def _component(p, k):
    pk = p**k
    if p == 2 and k == 1:
        return _Component(2, (), (), ())
    if p == 2 and k == 2:
        table = np.full(4, -1, dtype=np.int64)
        table[1], table[3] = 0, 1
        return _Component(4, (2,), (3,), (table,))
    if p == 2:
        # units mod 2^k are ±5^e
        half = pk // 4
        sign = np.full(pk, -1, dtype=np.int64)
        power = np.full(pk, -1, dtype=np.int64)
        x = 1
        for e in range(half):
            sign[x], power[x] = 0, e
            sign[pk - x], power[pk - x] = 1, e
            x = x * 5 % pk
        return _Component(pk, (2, half), (pk - 1, 5), (sign, power))

    g = int(primitive_root(pk))
    order = pk - pk // p
    table = np.full(pk, -1, dtype=np.int64)
    x = 1
    for e in range(order):
        table[x] = e
        x = x * g % pk
    return _Component(pk, (order,), (g,), (table,))


@dataclass(frozen=True, eq=False)
class UnitGroup:
    modulus: int
    cyclic_orders: tuple
    generators: tuple
    components: tuple

    @cached_property
    def order(self):
        return prod(self.cyclic_orders)

    @cached_property
    def exponent(self):
        """Least common multiple of the cyclic orders (1 for the trivial group)."""
        return lcm(*self.cyclic_orders) if self.cyclic_orders else 1

    @cached_property
    def units(self):
        residues = np.arange(self.modulus)
        return np.gcd(residues, self.modulus) == 1

    @cached_property
    def dlog_table(self):
        residues = np.arange(self.modulus)
        rows = []
        for component in self.components:
            local = residues % component.prime_power
            rows.extend(table[local] for table in component.dlogs)
        if not rows:
            return np.zeros((0, self.modulus), dtype=np.int64)
        return np.vstack(rows)

    def exponent_vector(self, a):
        a %= self.modulus
        if not self.units[a]:
            raise CharacterError(f"{a} is not a unit modulo {self.modulus}.")
        return tuple(int(v) for v in self.dlog_table[:, a])


@lru_cache(maxsize=None)
def unit_group(modulus):
    if modulus < 1 or modulus > MAX_MODULUS:
        raise ModulusError(f"Modulus must lie in [1, {MAX_MODULUS}], got {modulus}.")
    components = tuple(
        _component(int(p), int(k)) for p, k in sorted(factorint(modulus).items())
    )
    orders, generators = [], []
    for component in components:
        rest = modulus // component.prime_power
        for order, residue in zip(component.orders, component.residues):
            orders.append(order)
            if rest == 1:
                generators.append(residue)
            else:
                lifted, _ = crt([component.prime_power, rest], [residue, 1])
                generators.append(int(lifted))
    return UnitGroup(modulus, tuple(orders), tuple(generators), components)


def _roots_of_unity(numerators, denominator):
    """e(numerator/denominator) with exact values on the quarter turns, 0 where numerator < 0."""
    numerators = np.asarray(numerators)
    phase = 2.0 * np.pi * numerators / denominator
    values = np.cos(phase) + 1j * np.sin(phase)
    quarter = (4 * numerators) % denominator == 0
    exact = np.array([1, 1j, -1, -1j])[((4 * numerators) // denominator) % 4]
    values = np.where(quarter, exact, values)
    return np.where(numerators < 0, 0, values)


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    exponents: tuple

    def __post_init__(self):
        group = unit_group(self.modulus)
        if len(self.exponents) != len(group.cyclic_orders):
            raise CharacterError(
                f"Expected {len(group.cyclic_orders)} exponents modulo {self.modulus}, "
                f"got {len(self.exponents)}."
            )
        reduced = tuple(int(r) % o for r, o in zip(self.exponents, group.cyclic_orders))
        object.__setattr__(self, "exponents", reduced)

    def __str__(self):
        return self.label

    @property
    def label(self):
        return f"chi_{self.modulus}[{','.join(str(r) for r in self.exponents)}]"

    @property
    def group(self):
        return unit_group(self.modulus)

    @cached_property
    def angles(self):
        """Angle numerators over the group exponent; -1 marks non-units."""
        group = self.group
        exponent = group.exponent
        acc = np.zeros(self.modulus, dtype=np.int64)
        for row, r, order in zip(group.dlog_table, self.exponents, group.cyclic_orders):
            acc = (acc + row * (r * (exponent // order))) % exponent
        acc[~group.units] = -1
        return acc

    @cached_property
    def values(self):
        return _roots_of_unity(self.angles, self.group.exponent)

    def __call__(self, n):
        return complex(self.values[int(n) % self.modulus])

    def at(self, n):
        """Vectorised evaluation on an integer array."""
        return self.values[np.asarray(n, dtype=np.int64) % self.modulus]

    def angle(self, n):
        numerator = int(self.angles[int(n) % self.modulus])
        if numerator < 0:
            return None
        return Fraction(numerator, self.group.exponent)

    @property
    def is_principal(self):
        return not any(self.exponents)

    @cached_property
    def parity(self):
        return 1 if self.angles[(self.modulus - 1) % self.modulus] == 0 else -1

    @property
    def is_even(self):
        return self.parity == 1

    @cached_property
    def order(self):
        orders = self.group.cyclic_orders
        return lcm(*(o // gcd(o, r) for o, r in zip(orders, self.exponents))) if orders else 1

    @cached_property
    def conductor(self):
        angles = self.angles
        for d in divisors(self.modulus):
            lifts = angles[np.arange(1, self.modulus + 1, d) % self.modulus]
            if np.all(lifts[lifts >= 0] == 0):
                return int(d)
        return self.modulus

    @property
    def is_primitive(self):
        return self.conductor == self.modulus

    def conj(self):
        return DirichletCharacter(self.modulus, tuple(-r for r in self.exponents))

    def __mul__(self, other):
        if other.modulus == self.modulus:
            return DirichletCharacter(
                self.modulus, tuple(a + b for a, b in zip(self.exponents, other.exponents))
            )
        modulus = lcm(self.modulus, other.modulus)
        return self.induce(modulus) * other.induce(modulus)

    def induce(self, modulus):
        if modulus % self.modulus:
            raise CharacterError(f"{modulus} is not a multiple of {self.modulus}.")
        if modulus == self.modulus:
            return self
        return character_from_generator_values(modulus, self.angle)

    def primitive(self):
        """The primitive character inducing this one."""
        d = self.conductor
        if d == self.modulus:
            return self

        def angle_at(g):
            lift = g
            while gcd(lift, self.modulus) != 1:
                lift += d
            return self.angle(lift)

        return character_from_generator_values(d, angle_at)


def character_from_generator_values(modulus, angle_at):
    """Build the character mod `modulus` whose value at each generator is e(angle_at(g))."""
    group = unit_group(modulus)
    exponents = []
    for g, order in zip(group.generators, group.cyclic_orders):
        scaled = Fraction(angle_at(g)) * order
        if scaled.denominator != 1:
            raise CharacterError(f"No character mod {modulus} takes these generator values.")
        exponents.append(int(scaled) % order)
    return DirichletCharacter(modulus, tuple(exponents))


def principal(modulus):
    return DirichletCharacter(modulus, (0,) * len(unit_group(modulus).cyclic_orders))


def trivial():
    return principal(1)


def character_table(modulus):
    if modulus < 1:
        raise ModulusError(f"Modulus must be positive, got {modulus}.")
    group = unit_group(modulus)
    return [
        DirichletCharacter(modulus, exponents)
        for exponents in product(*(range(o) for o in group.cyclic_orders))
    ]


def even_primitive_characters(modulus):
    return [chi for chi in character_table(modulus) if chi.is_even and chi.is_primitive]


def quadratic_character(p):
    """The Legendre symbol mod an odd prime p."""
    group = unit_group(p)
    if len(group.cyclic_orders) != 1 or group.cyclic_orders[0] != p - 1:
        raise ModulusError(f"{p} is not an odd prime.")
    return DirichletCharacter(p, ((p - 1) // 2,))


def _crt_lift(g, m1, m2):
    if m2 == 1:
        return g
    lifted, _ = crt([m1, m2], [g, 1])
    return int(lifted)


def crt_factor(chi, m1, m2):
    """Split chi mod m1*m2 as chi' mod m1 times chi'' mod m2."""
    if m1 * m2 != chi.modulus or gcd(m1, m2) != 1:
        raise NonCoprimeSplit(
            f"Cannot split modulus {chi.modulus} as {m1} x {m2}: factors must be coprime."
        )
    first = character_from_generator_values(m1, lambda g: chi.angle(_crt_lift(g, m1, m2)))
    second = character_from_generator_values(m2, lambda g: chi.angle(_crt_lift(g, m2, m1)))
    return first, second
