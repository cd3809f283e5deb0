#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "gapforge/certificate.hpp"
#include "gapforge/rng.hpp"

using namespace gapforge;
using crtgap::GapCertificate;
using crtgap::u64;

namespace {

covering::CoveringSystem toy_cover_04() {
  // classes {0 mod 2, 1 mod 3, 3 mod 5} cover (0,4]
  covering::CoveringSystem cs;
  cs.x = 6;
  cs.y = 4;
  cs.classes = {{2, 0, 1}, {3, 1, 3}, {5, 3, 4}};
  cs.complete = true;
  return cs;
}

}  // namespace

TEST_CASE("crt_assemble") {
  auto single = crtgap::crt_assemble({{BigNat(1), BigNat(2)}});
  CHECK(single.value == 1);
  CHECK(single.modulus == 2);

  auto two = crtgap::crt_assemble({{BigNat(1), BigNat(2)}, {BigNat(2), BigNat(3)}});
  CHECK(two.value == 5);
  CHECK(two.modulus == 6);

  auto three = crtgap::crt_assemble(
      {{BigNat(0), BigNat(2)}, {BigNat(0), BigNat(3)}, {BigNat(4), BigNat(5)}});
  CHECK(three.value == 24);
  CHECK(three.modulus == 30);

  CHECK_THROWS_AS(
      crtgap::crt_assemble({{BigNat(1), BigNat(4)}, {BigNat(1), BigNat(6)}}),
      crtgap::CrtError);
}

TEST_CASE("crt result re-reduces to every input class") {
  auto rng = rng::SplitMix64(11);
  const std::vector<u64> mods = {3, 5, 7, 11, 13, 16};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<BigNat, BigNat>> classes;
    for (u64 m : mods) classes.emplace_back(BigNat(rng.below(m)), BigNat(m));
    auto res = crtgap::crt_assemble(classes);
    for (const auto& [r, m] : classes) CHECK(res.value % m == r);
    CHECK(res.value >= 0);
    CHECK(res.value < res.modulus);
  }
}

TEST_CASE("certify_gap on the hand-worked toy covering") {
  auto cert = crtgap::certify_gap(toy_cover_04());
  CHECK(cert.m0 == 2);
  CHECK(cert.modulus == 30);
  REQUIRE(cert.witnesses.size() == 4);
  CHECK(cert.witness_for(1) == 3);
  CHECK(cert.witness_for(2) == 2);
  CHECK(cert.witness_for(3) == 5);
  CHECK(cert.witness_for(4) == 2);

  // m0+1 = 3 and m0+3 = 5 equal their witnesses: degenerate until lifted
  CHECK(crtgap::degenerate_offsets(cert) == std::vector<u64>{1, 3});
  CHECK_FALSE(crtgap::verify_certificate(cert).ok);

  auto lifted = crtgap::lift_certificate(cert, 1);
  CHECK(lifted.m0 == 32);
  CHECK(crtgap::degenerate_offsets(lifted).empty());
  CHECK(crtgap::verify_certificate(lifted).ok);

  auto rec = crtgap::brute_gap_check(lifted);
  CHECK(rec.p_lo == 31);
  CHECK(rec.p_hi == 37);
  CHECK(rec.gap >= lifted.y);
}

TEST_CASE("certify_gap refuses bad coverings") {
  covering::CoveringSystem not_covering;
  not_covering.y = 6;
  not_covering.classes = {{2, 0, 1}, {3, 0, 1}, {5, 4, 4}};
  not_covering.complete = true;  // lie: offset 1 is uncovered
  CHECK_THROWS_AS(crtgap::certify_gap(not_covering), crtgap::CertificateError);

  covering::CoveringSystem incomplete;
  incomplete.y = 2;
  incomplete.complete = false;
  CHECK_THROWS_AS(crtgap::certify_gap(incomplete), crtgap::CertificateError);
}

TEST_CASE("lift preserves witnesses") {
  auto cert = crtgap::certify_gap(toy_cover_04());
  auto same = crtgap::lift_certificate(cert, 0);
  CHECK(same.m0 == cert.m0);
  auto twice = crtgap::lift_certificate(cert, 2);
  for (const auto& [u, p] : twice.witnesses) CHECK((twice.m0 + u) % p == 0);
}

TEST_CASE("verify_certificate catches tampering") {
  auto cert = crtgap::lift_certificate(crtgap::certify_gap(toy_cover_04()), 1);
  REQUIRE(crtgap::verify_certificate(cert).ok);

  auto tampered = cert;
  tampered.witnesses[2].second = 3;  // offset 3: 3 does not divide 35
  auto out = crtgap::verify_certificate(tampered);
  CHECK_FALSE(out.ok);
  CHECK(out.failing_offset == 3);

  auto missing = cert;
  missing.witnesses.erase(missing.witnesses.begin());
  auto out2 = crtgap::verify_certificate(missing);
  CHECK_FALSE(out2.ok);
  CHECK(out2.failing_offset == 1);

  GapCertificate vacuous;
  CHECK(crtgap::verify_certificate(vacuous).ok);
}

TEST_CASE("certify -> lift -> verify round trip over random coverings") {
  auto rng = rng::SplitMix64(2024);
  int completes = 0;
  for (int trial = 0; trial < 200 && completes < 25; ++trial) {
    const u64 x = 6 + rng.below(45);   // x <= 50
    const u64 y = 2 + rng.below(59);   // y <= 60
    auto cs = covering::build_erdos_covering(x, y);
    if (!cs.complete) continue;
    ++completes;
    auto cert = crtgap::lift_certificate(crtgap::certify_gap(cs), 1);
    auto verdict = crtgap::verify_certificate(cert, 2);
    CHECK(verdict.ok);
    auto rec = crtgap::brute_gap_check(cert);
    CHECK(rec.gap >= y);
  }
  CHECK(completes >= 25);
}

TEST_CASE("certificate JSON round-trips bit-exactly") {
  auto cert = crtgap::lift_certificate(crtgap::certify_gap(toy_cover_04()), 1);
  const auto j = crtgap::to_json(cert);
  const std::string once = j.dump(2);
  auto parsed = crtgap::certificate_from_json(nlohmann::json::parse(once));
  CHECK(crtgap::to_json(parsed).dump(2) == once);
  CHECK(parsed.m0 == cert.m0);
  CHECK(parsed.modulus == cert.modulus);
  CHECK(parsed.witnesses == cert.witnesses);

  // decimal strings keep big values intact
  GapCertificate big;
  big.m0 = bignat_from_dec("123456789012345678901234567890123456789");
  big.modulus = big.m0 + 1;
  auto jj = crtgap::to_json(big);
  auto back = crtgap::certificate_from_json(jj);
  CHECK(back.m0 == big.m0);
}

TEST_CASE("brute_gap_check guards its scale") {
  GapCertificate huge;
  huge.m0 = bignat_from_dec("100000000000000000000000000");
  huge.modulus = huge.m0 * 2;
  huge.y = 4;
  CHECK_THROWS_AS(crtgap::brute_gap_check(huge), crtgap::CertificateError);
}
