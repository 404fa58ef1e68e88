from polarstar.galois.field import (
    Field,
    field_new,
    is_prime_power,
    prime_factors,
    prime_power,
    prime_powers,
)

__all__ = [
    "Field",
    "field_new",
    "is_prime_power",
    "prime_factors",
    "prime_power",
    "prime_powers",
]
