// Prints one PASS/FAIL line per acceptance criterion. Exit status is 0 only
// when every criterion passes.

#include "superwarp/suite.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

using namespace superwarp;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Fails on the first failing record, naming it.
Outcome all_records(const VerificationReport& rep, std::size_t min_records = 1) {
  Outcome o;
  for (const auto& r : rep.records)
    if (!r.pass) {
      o.pass = false;
      o.detail = r.check_id + " " + r.tuple + ": " + r.residual.substr(0, 60);
      break;
    }
  if (o.pass && rep.records.size() < min_records) {
    o.pass = false;
    o.detail = "only " + std::to_string(rep.records.size()) + " checks";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d/%zu checks", rep.passed(), rep.records.size());
  o.detail = o.detail.empty() ? buf : std::string(buf) + "; " + o.detail;
  return o;
}

VerificationReport filtered(const VerificationReport& rep,
                            const std::function<bool(const CheckRecord&)>& keep) {
  VerificationReport out;
  for (const auto& r : rep.records)
    if (keep(r)) out.add(r);
  return out;
}

bool starts(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

Outcome with_budget(Outcome o, double seconds, double budget) {
  if (seconds > budget) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(static_cast<int>(budget)) + " s budget";
  }
  return o;
}

// Bundled warped fibers must include two with equal q - n but different
// (q, n), and one with a different q - n.
bool fiber_coverage(const SpecSet& specs) {
  std::set<std::pair<int, int>> dims;
  for (const auto& w : specs.warped) dims.insert({w.fiber.even_dim(), w.fiber.odd_dim()});
  for (const auto& a : dims)
    for (const auto& b : dims) {
      if (a == b || a.first - a.second != b.first - b.second) continue;
      for (const auto& c : dims)
        if (c.first - c.second != a.first - a.second) return true;
    }
  return false;
}

}  // namespace

int main() {
  SpecSet specs = bundled_spec_set();
  struct Criterion {
    const char* title;
    std::function<Outcome(double&)> run;
  };
  auto timed = [](double& secs, auto&& f) {
    auto t0 = std::chrono::steady_clock::now();
    auto r = f();
    secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  };

  std::vector<Criterion> criteria = {
      {"flat R^(1,2): Levi-Civita symbols, Riemann and Ricci vanish",
       [&](double& s) { return with_budget(all_records(timed(s, check_flat_r12)), s, 1); }},
      {"ssnm on R^(1,2), P = d_t: stated curvature and Ric(d_t,d_t) = 2",
       [&](double& s) { return with_budget(all_records(timed(s, check_ssnm_r12)), s, 1); }},
      {"connection axioms and the ssnm characterization on all bundled specs",
       [&](double& s) {
         return all_records(timed(s, [&] { return check_connection_axioms(specs); }));
       }},
      {"curvature comparison identity on >= 3 (g, P) instances",
       [&](double& s) {
         VerificationReport rep = timed(s, [&] { return check_curvature_comparison(specs); });
         std::set<std::string> manifolds;
         for (const auto& r : rep.records) manifolds.insert(r.tuple.substr(0, r.tuple.rfind(" (")));
         Outcome o = all_records(rep);
         if (manifolds.size() < 3) {
           o.pass = false;
           o.detail += "; only " + std::to_string(manifolds.size()) + " instances";
         }
         return o;
       }},
      {"warped-product statements on every compatible bundled spec",
       [&](double& s) {
         Outcome o = all_records(timed(s, [&] { return check_warped_statements(specs); }));
         if (!fiber_coverage(specs)) {
           o.pass = false;
           o.detail += "; bundled fibers lack the required (q, n) coverage";
         }
         return with_budget(o, s, 30);
       }},
      {"Ricci of the ssnm connection on R^(1,0) x_h F with symbolic h",
       [&](double& s) {
         VerificationReport rep = timed(s, [&] { return check_ricci_warped_line(specs); });
         Outcome o = all_records(rep);
         bool block = false;
         for (const auto& r : rep.records) block |= r.check_id == "4.1(3)";
         if (!block) {
           o.pass = false;
           o.detail += "; no fiber-block records";
         }
         return o;
       }},
      {"q - n = 1 families for lambda0 < 1, = 1, > 1 pass the residual check; perturbed fails",
       [&](double& s) {
         return all_records(timed(s, [] { return check_einstein_theorem("4.4", kSeed); }));
       }},
      {"q - n not in {0, 1}: two families, square-root constant, 50 random non-solutions",
       [&](double& s) {
         VerificationReport rep = timed(s, [] { return check_einstein_theorem("4.6", kSeed); });
         Outcome o = all_records(rep);
         int sweep = 0;
         for (const auto& r : rep.records) sweep += r.check_id == "4.6(sweep)" && r.pass;
         if (sweep != 50) {
           o.pass = false;
           o.detail += "; sweep " + std::to_string(sweep) + "/50";
         }
         return o;
       }},
      {"Levi-Civita on R^(1,2): three cases Einstein with lambda = 0",
       [&](double& s) {
         VerificationReport rep = timed(s, [] { return check_einstein_theorem("4.7", kSeed); });
         Outcome o = all_records(rep);
         for (const char* id : {"4.7(1)", "4.7(2)", "4.7(3)"})
           if (filtered(rep, [&](const CheckRecord& r) { return r.check_id == id; })
                   .records.empty()) {
             o.pass = false;
             o.detail += std::string("; no ") + id + " records";
           }
         return o;
       }},
      {"ssnm on R^(1,2): classification by q - n and the exponential elimination",
       [&](double& s) {
         VerificationReport rep = timed(s, [] { return check_einstein_theorem("4.8", kSeed); });
         // The criterion covers the classification and the elimination; the
         // full residual of the constant family is reported by verify 4.8.
         VerificationReport sel = filtered(rep, [](const CheckRecord& r) {
           return starts(r.anchor, "no family") || starts(r.anchor, "constant family") ||
                  starts(r.anchor, "q - n = 0") || r.check_id == "4.8(elimination)";
         });
         return all_records(sel, 6 + 1 + 10);
       }},
      {"property suites, >= 100 seeded instances each",
       [&](double& s) {
         VerificationReport rep = timed(s, [] { return check_properties(kSeed, 100); });
         Outcome o = all_records(rep);
         std::map<std::string, int> per;
         for (const auto& r : rep.records) per[r.check_id + " " + r.anchor]++;
         for (const auto& [name, n] : per)
           if (n < 100) {
             o.pass = false;
             o.detail += "; " + name + " has " + std::to_string(n);
           }
         return o;
       }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    double secs = 0;
    Outcome o;
    try {
      o = criteria[i].run(secs);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2zu: %s  %s (%s; %.2f s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].title, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d passed, %d failed\n", criteria.size(),
              static_cast<int>(criteria.size()) - failed, failed);
  return failed ? 1 : 0;
}
