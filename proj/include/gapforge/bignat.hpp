#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gapforge {

// Arbitrary-precision natural number. We use GMP's mpz_class directly and
// keep the two invariants we rely on at the edges: values are non-negative
// and decimal strings round-trip losslessly.
using BigNat = mpz_class;

inline BigNat bignat_from_dec(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty decimal string");
  BigNat v;
  if (mpz_set_str(v.get_mpz_t(), s.c_str(), 10) != 0)
    throw std::invalid_argument("bad decimal string: " + s);
  if (v < 0) throw std::invalid_argument("negative value: " + s);
  return v;
}

inline std::string to_dec(const BigNat& v) { return v.get_str(); }

inline bool fits_u64(const BigNat& v) {
  return v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const BigNat& v) {
  static_assert(sizeof(unsigned long) == 8, "LP64 assumed");
  if (!fits_u64(v)) throw std::overflow_error("value exceeds 64 bits");
  return mpz_get_ui(v.get_mpz_t());
}

}  // namespace gapforge
