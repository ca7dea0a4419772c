// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "amub/cli.hpp"
#include "amub/mubgen.hpp"
#include "oracles.hpp"

using namespace amub;

namespace {

struct CriterionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw CriterionFailure(msg);
}

struct Harness {
    int failures = 0;

    void run(const std::string& label, double limit_seconds,
             const std::function<void(std::vector<std::string>&)>& body) {
        std::vector<std::string> notes;
        const auto t0 = std::chrono::steady_clock::now();
        std::string error;
        try {
            body(notes);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        if (error.empty() && limit_seconds > 0 && secs > limit_seconds)
            error = "runtime " + std::to_string(secs) + " s exceeds " +
                    std::to_string(limit_seconds) + " s";
        if (error.empty()) {
            std::printf("[PASS] %s (%.3f s)\n", label.c_str(), secs);
        } else {
            std::printf("[FAIL] %s (%.3f s): %s\n", label.c_str(), secs, error.c_str());
            ++failures;
        }
        for (const auto& n : notes) std::printf("       note: %s\n", n.c_str());
        std::fflush(stdout);
    }
};

struct Built {
    FactorizationPlan plan;
    Design design;
    BasisSet bases;
    SpectrumReport report;
};

Built build(std::size_t d, std::size_t k, std::size_t s, Target target) {
    Built b;
    b.plan = choose_plan(d, k, s, target);
    b.design = realize_design(b.plan);
    b.bases = assemble_bases(b.design, target);
    b.report = check_claims(b.design, b.bases, b.plan);
    return b;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Exact zero pattern + blockwise Gram; equals the dense U*U - I defect
/// exactly because off-support entries are written as exact 0.0.
double unitarity_defect_structural(const ClassBasis& cb, std::size_t d) {
    const CMatrix m = cb.dense(d);
    std::vector<char> support(d * d, 0);
    for (std::size_t bi = 0; bi < cb.blocks.size(); ++bi)
        for (std::size_t j = 0; j < cb.blocks[bi].size(); ++j)
            for (Point r : cb.blocks[bi]) support[(cb.col_offset[bi] + j) * d + r] = 1;
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t r = 0; r < d; ++r)
            if (!support[c * d + r] && m.at(r, c) != std::complex<double>(0.0, 0.0))
                return 1.0;  // off-support entry not structurally zero
    double worst = 0.0;
    for (std::size_t bi = 0; bi < cb.blocks.size(); ++bi) {
        const std::size_t k = cb.blocks[bi].size(), off = cb.col_offset[bi];
        for (std::size_t c1 = 0; c1 < k; ++c1)
            for (std::size_t c2 = 0; c2 < k; ++c2) {
                std::complex<double> dot = 0.0;
                for (Point r : cb.blocks[bi])
                    dot += std::conj(m.at(r, off + c1)) * m.at(r, off + c2);
                if (c1 == c2) dot -= 1.0;
                worst = std::max(worst, std::abs(dot));
            }
    }
    return worst;
}

}  // namespace

int main() {
    Harness h;

    h.run("criterion 1: d=32 plus trim, beta = sqrt(2), spectrum in Delta_1", 1.0,
          [](std::vector<std::string>& notes) {
              const Built b = build(32, 4, 8, Target::complex_field);
              require(b.plan.route == Route::trim_plus && b.plan.q->q == 7 && b.plan.e == 3 &&
                          b.plan.f == 1,
                      "plan must be q=7, e=3, f=1 on the plus route");
              require(b.bases.bases.size() == 8, "expected 8 bases");
              require(close(b.report.beta_realized, std::sqrt(2.0), 1e-9),
                      "beta must equal sqrt(2) within 1e-9");

              // exact Delta_1 products from the normalizer orders {4, 5, 7}
              const auto delta1 = oracle::theta_products({4, 5, 7});
              require(delta1.size() == 7, "Delta_1 must contain 7 values");
              for (double v : b.report.delta) {
                  bool inside = false;
                  for (double p : delta1) inside = inside || close(v, p, 1e-9);
                  require(inside, "realized value outside the exact Delta_1 products");
              }
              require(b.report.delta_ok, "claim flag for the spectrum must pass");

              // rounded reference list tracks the exact products within 0.03
              const std::vector<double> reference{0, 0.79, 0.96, 1.07, 1.13, 1.24, 1.41};
              const double sd = std::sqrt(32.0);
              for (std::size_t i = 0; i < reference.size(); ++i)
                  require(close(delta1[i] * sd, reference[i], 0.03),
                          "reference entry drifts more than 0.03 from the exact product");

              for (const auto& n : b.report.notes)
                  if (n.find("not attained") != std::string::npos) notes.push_back(n);
          });

    h.run("criterion 2: d=30 minus trim, beta = sqrt(30)/4, spectrum in Delta_2", 1.0,
          [](std::vector<std::string>& notes) {
              const Built b = build(30, 5, 6, Target::complex_field);
              require(b.plan.route == Route::trim_minus && b.plan.q->q == 7 && b.plan.e == 2 &&
                          b.plan.f == 1,
                      "plan must be q=7, e=2, f=1 on the minus route");
              require(b.bases.bases.size() == 7, "expected 7 bases");
              require(close(b.report.beta_realized, std::sqrt(30.0) / 4.0, 1e-9),
                      "beta must equal sqrt(30)/4 within 1e-9");
              require(b.report.delta_expected.size() == 4, "Delta_2 must contain 4 values");
              require(b.report.delta_ok, "realized spectrum must sit inside Delta_2");
              require(b.report.all_claims_ok(), "all claim flags must pass");
              // the rounded reference list prints six nonzero values, more than
              // the three nonzero products Delta_2 admits; logged, not asserted
              notes.push_back(
                  "rounded reference list for d=30 has 6 nonzero entries; Delta_2 admits 3");
          });

    h.run("criterion 3: d=40 real union, beta = 2*sqrt(5/8), eps = 0.8, spectrum in {0,1/8,1/4}",
          1.0, [](std::vector<std::string>&) {
              const Built b = build(40, 5, 8, Target::real_field);
              require(b.plan.route == Route::extend_const, "route must be the union extension");
              require(b.bases.bases.size() == 5, "expected 5 real bases");
              require(close(b.report.beta_realized, 2.0 * std::sqrt(5.0 / 8.0), 1e-9),
                      "beta must equal 2*sqrt(5/8) within 1e-9");
              for (double eps : b.report.eps_per_basis)
                  require(close(eps, 0.8, 1e-12), "sparsity must be 0.8 exactly");
              require(b.report.eps_ok, "exact zero count must match the sparsity formula");
              require(b.report.delta_exact.has_value(), "real flavor must carry exact fractions");
              for (const auto& fr : *b.report.delta_exact)
                  require(fr == Fraction{0, 1} || fr == Fraction{1, 64} || fr == Fraction{1, 16},
                          "spectrum fraction outside {0, 1/64, 1/16}");
              require(b.report.all_claims_ok(), "all claim flags must pass");
          });

    h.run("criterion 4: d=28 real shrink, beta = sqrt(7)/2, magnitudes in {0, 1/4}", 1.0,
          [](std::vector<std::string>&) {
              const Built b = build(28, 4, 7, Target::real_field);
              require(b.plan.route == Route::shrink_const, "route must be the shrink");
              require(b.bases.bases.size() == 7, "expected 7 bases");
              require(close(b.report.beta_realized, std::sqrt(7.0 / 4.0), 1e-9),
                      "beta must equal sqrt(7/4) within 1e-9");
              require(b.report.delta_exact.has_value(), "real flavor must carry exact fractions");
              for (const auto& fr : *b.report.delta_exact)
                  require(fr == Fraction{0, 1} || fr == Fraction{1, 16},
                          "magnitude outside {0, 1/4}");
              require(b.report.all_claims_ok(), "all claim flags must pass");
          });

    h.run("criterion 5: d=84 real union, beta = 2*sqrt(7/12), spectrum in {0,1/12,1/6}", 5.0,
          [](std::vector<std::string>&) {
              const Built b = build(84, 7, 12, Target::real_field);
              require(b.bases.bases.size() == 7, "expected 7 bases");
              require(close(b.report.beta_realized, 2.0 * std::sqrt(7.0 / 12.0), 1e-9),
                      "beta must equal 2*sqrt(7/12) within 1e-9");
              require(close(b.report.beta_realized, 1.5275, 2e-4),
                      "beta must match 1.5275 at reporting precision");
              require(b.report.delta_exact.has_value(), "real flavor must carry exact fractions");
              for (const auto& fr : *b.report.delta_exact)
                  require(fr == Fraction{0, 1} || fr == Fraction{1, 144} || fr == Fraction{1, 36},
                          "magnitude outside {0, 1/12, 1/6}");
              require(b.report.all_claims_ok(), "all claim flags must pass");
          });

    h.run("criterion 6: d=60 plus trim via q=9, ten bases vs MUB lower bound 4", 5.0,
          [](std::vector<std::string>&) {
              const Built b = build(60, 6, 10, Target::complex_field);
              require(b.plan.route == Route::trim_plus && b.plan.q->q == 9 && b.plan.e == 3 &&
                          b.plan.f == 1,
                      "plan must be q=9, e=3, f=1 on the plus route");
              require(b.bases.bases.size() == 10, "expected 10 bases");
              require(close(b.report.beta_realized, std::sqrt(10.0 / 6.0), 1e-9),
                      "beta must equal sqrt(10/6) within 1e-9");
              require(close(b.report.beta_realized, 1.2910, 2e-4),
                      "beta must match 1.29 at reporting precision");
              require(mub_lower_bound(60) == 4, "MUB lower bound for 60 must be 4");
              require(b.report.all_claims_ok(), "all claim flags must pass");
          });

    h.run("criterion 7: d=42 constant minus trim, beta = sqrt(42)/6, count note surfaced", 1.0,
          [](std::vector<std::string>& notes) {
              const Built b = build(42, 6, 7, Target::complex_field);
              require(b.plan.route == Route::trim_minus && b.plan.q->q == 7 && b.plan.e == 1 &&
                          b.plan.f == 0,
                      "plan must be q=7, e=1, f=0 on the minus route");
              require(b.bases.bases.size() == 7, "expected 7 bases");
              require(close(b.report.beta_realized, std::sqrt(42.0) / 6.0, 1e-9),
                      "beta must equal sqrt(42)/6 within 1e-9");
              require(close(b.report.beta_realized, 1.0801, 2e-4),
                      "beta must match 1.08 at reporting precision");
              bool noted = false;
              for (const auto& n : b.report.notes)
                  if (n.find("donor") != std::string::npos) {
                      noted = true;
                      notes.push_back(n);
                  }
              require(noted, "basis-count note must be surfaced in the report");
              notes.push_back("reference count of 8 bases for d=42 is not reproduced; the "
                              "construction yields q = 7 classes");
              require(b.report.all_claims_ok(), "all claim flags must pass");
          });

    h.run("criterion 8: square dimensions q in {2,3,4,5,7,8,9} give true MUB families", 0.0,
          [](std::vector<std::string>&) {
              for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
                  const std::size_t d = static_cast<std::size_t>(q) * q;
                  const Built b = build(d, q, q, Target::complex_field);
                  require(b.plan.route == Route::square_mub,
                          "d = q^2 must route to the square construction");
                  require(b.bases.bases.size() == static_cast<std::size_t>(q) + 1,
                          "expected q+1 bases");
                  // dense check: every cross magnitude equals 1/q within 1e-10
                  std::vector<CMatrix> mats;
                  for (const auto& cb : b.bases.bases) mats.push_back(cb.dense(d));
                  for (std::size_t l = 0; l < mats.size(); ++l)
                      for (std::size_t m = l + 1; m < mats.size(); ++m)
                          for (std::size_t i = 0; i < d; ++i)
                              for (std::size_t j = 0; j < d; ++j) {
                                  std::complex<double> z = 0.0;
                                  for (std::size_t r = 0; r < d; ++r)
                                      z += std::conj(mats[l].at(r, i)) * mats[m].at(r, j);
                                  require(close(std::abs(z), 1.0 / q, 1e-10),
                                          "cross magnitude must equal 1/q within 1e-10");
                              }
                  require(b.report.is_mub, "MUB flag must be set");
              }
          });

    h.run("criterion 9: property suite over all feasible dimensions up to 200", 60.0,
          [](std::vector<std::string>& notes) {
              std::size_t built = 0, oracle_checked = 0;
              for (std::size_t d = 4; d <= 200; ++d) {
                  for (Target target : {Target::complex_field, Target::real_field}) {
                      FactorizationPlan plan;
                      Design design;
                      try {
                          plan = choose_plan(d, std::nullopt, std::nullopt, target);
                          design = realize_design(plan);
                      } catch (const Error&) {
                          continue;  // infeasible dimension/target or file-only MOLS side
                      }
                      ++built;

                      // partition exactness
                      require(validate_design(design).ok(), "partition property failed");
                      for (const auto& pc : design.classes)
                          require(oracle::is_partition(pc, design.d),
                                  "oracle partition check failed");

                      // mu equals the route claim, by brute force
                      const std::size_t mu_claim =
                          plan.route == Route::extend_const ? 2 : 1;
                      require(intersection_number(design) == mu_claim,
                              "mu does not match the route claim at d = " + std::to_string(d));

                      BasisSet bs;
                      try {
                          bs = assemble_bases(design, target);
                      } catch (const MissingRealHadamard&) {
                          continue;  // e.g. square route on a real target without H(q)
                      }
                      const SpectrumReport rep = check_claims(design, bs, plan);
                      require(rep.all_claims_ok(),
                              "claim flags failed at d = " + std::to_string(d));

                      const double dd = static_cast<double>(d);
                      for (std::size_t l = 0; l < bs.bases.size(); ++l) {
                          const auto& cb = bs.bases[l];
                          // sparsity formula equals the directly counted zeros
                          const CMatrix m = cb.dense(d);
                          std::uint64_t zeros = 0, sq_sum = 0;
                          std::size_t kmin = d, kmax = 0;
                          for (const auto& z : m.a)
                              if (z == std::complex<double>(0.0, 0.0)) ++zeros;
                          for (const auto& blk : cb.blocks) {
                              sq_sum += static_cast<std::uint64_t>(blk.size()) * blk.size();
                              kmin = std::min(kmin, blk.size());
                              kmax = std::max(kmax, blk.size());
                          }
                          require(zeros == static_cast<std::uint64_t>(d) * d - sq_sum,
                                  "zero count differs from the sparsity formula");
                          // block-size sparsity bounds
                          const double eps = rep.eps_per_basis[l];
                          require(eps >= 1.0 - static_cast<double>(kmax) / dd - 1e-12 &&
                                      eps <= 1.0 - static_cast<double>(kmin) / dd + 1e-12,
                                  "sparsity bounds violated");
                          // unitarity
                          require(unitarity_defect_structural(cb, d) <= 1e-10,
                                  "assembled basis not unitary to 1e-10");
                      }

                      // spectrum shortcut against the dense oracle
                      if (d <= 100) {
                          ++oracle_checked;
                          const auto slow = oracle::dense_spectrum(bs);
                          require(slow.delta.size() == rep.delta.size(),
                                  "oracle spectrum size mismatch at d = " + std::to_string(d));
                          for (std::size_t i = 0; i < slow.delta.size(); ++i)
                              require(std::abs(slow.delta[i] - rep.delta[i]) <= 1e-12,
                                      "oracle spectrum value mismatch");
                          require(std::abs(slow.beta - rep.beta_realized) <= 1e-12,
                                  "oracle beta mismatch");
                      }
                  }
              }
              notes.push_back("built " + std::to_string(built) + " designs; dense-oracle checked " +
                              std::to_string(oracle_checked) + " (exhaustive for d <= 100)");
          });

    h.run("criterion 10: planner sweep over every feasible composite d up to 1000", 10.0,
          [](std::vector<std::string>& notes) {
              std::size_t planned = 0;
              for (std::size_t d = 4; d <= 1000; ++d) {
                  std::size_t k = 0;
                  for (std::size_t a = static_cast<std::size_t>(std::sqrt(double(d))); a >= 2; --a)
                      if (d % a == 0) {
                          k = a;
                          break;
                      }
                  if (k == 0) continue;  // prime
                  const std::size_t s = d / k;
                  if ((s - k) * (s - k) >= d) continue;
                  const auto plan = choose_plan(d, std::nullopt, std::nullopt,
                                                Target::complex_field);
                  ++planned;
                  require(plan.q.has_value(), "plan must carry a prime power");
                  const std::size_t q = plan.q->q;
                  if (plan.sign == Sign::plus)
                      require((q - plan.e) * (q + plan.f) == d, "(q-e)(q+f) must equal d");
                  else
                      require((q - plan.e) * (q - plan.f) == d, "(q-e)(q-f) must equal d");
                  if (plan.sign == Sign::plus) {
                      // 0 <= f <= delta <= e <= 2*delta with 2*delta = s-k
                      const std::size_t two_delta = plan.s - plan.k;
                      require(plan.e + plan.f == two_delta, "(e+f)/2 must equal delta");
                      require(2 * plan.f <= two_delta && two_delta <= 2 * plan.e &&
                                  plan.e <= two_delta,
                              "plus-route ordering 0 <= f <= delta <= e <= 2*delta failed");
                  }
              }
              notes.push_back(std::to_string(planned) + " dimensions planned");
          });

    if (h.failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", h.failures);
    return 1;
}
