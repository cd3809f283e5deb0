// End-to-end walk through the library: build a covering of (0, y], turn it
// into a CRT certificate, confirm the gap by brute force, then place a
// prime square inside a sieved stretch via the Maier matrix.

#include <iostream>

#include "gapforge/certificate.hpp"
#include "gapforge/covering.hpp"
#include "gapforge/kpower.hpp"

int main() {
  using namespace gapforge;

  const std::uint64_t x = 20, y = 12;
  auto cs = covering::build_erdos_covering(x, y);
  std::cout << "covering (0," << y << "] with primes < " << x << ": "
            << (cs.complete ? "complete" : "incomplete") << "\n";
  if (!cs.complete) return 1;

  auto cert = crtgap::lift_certificate(crtgap::certify_gap(cs), 1);
  std::cout << "m0 = " << to_dec(cert.m0) << " (mod " << to_dec(cert.modulus)
            << ")\n";
  auto verdict = crtgap::verify_certificate(cert);
  std::cout << "certificate " << (verdict.ok ? "valid" : "invalid") << "\n";

  auto rec = crtgap::brute_gap_check(cert);
  std::cout << "surrounding primes " << rec.p_lo << " .. " << rec.p_hi
            << " (gap " << rec.gap << " >= " << y << ")\n";

  if (auto hit = kpower::find_kth_power_in_gap(cert, 2, 500)) {
    std::cout << "prime square inside a sieved gap: " << to_dec(hit->q)
              << "^2 = " << to_dec(hit->qk) << " in (" << to_dec(hit->p_lo)
              << ", " << to_dec(hit->p_hi) << ")\n";
  }
  return 0;
}
