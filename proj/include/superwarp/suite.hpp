#pragma once

// Verification suites shared by the CLI and the acceptance binary. Every
// suite returns records in a fixed order so reports are reproducible.

#include "superwarp/einstein.hpp"
#include "superwarp/spec_io.hpp"

namespace superwarp {

struct SpecSet {
  std::vector<ManifoldSpec> manifolds;
  std::vector<WarpedSpec> warped;
  std::string checksum;  // FNV-1a over the member checksums in load order
};

/// Every bundled spec that loads cleanly; negative examples are skipped.
SpecSet bundled_spec_set();
SpecSet spec_set_from(const LoadedSpec& spec);

/// Levi-Civita on R^(1,2): symbols, curvature and Ricci vanish.
VerificationReport check_flat_r12();
/// ssnm on R^(1,2) with P = d_t against the stated components.
VerificationReport check_ssnm_r12();

/// Torsion and non-metricity of Levi-Civita, and of ssnm against its
/// characterizing formulas, on all frame triples of every instance with P.
VerificationReport check_connection_axioms(const SpecSet& specs);
/// Curvature comparison identity between ssnm and Levi-Civita.
VerificationReport check_curvature_comparison(const SpecSet& specs);

/// Section 3 statements; `only` restricts to one statement id. Specs that
/// do not meet a statement's hypotheses are skipped unless `strict`, in
/// which case HypothesisError propagates.
VerificationReport check_warped_statements(const SpecSet& specs, const std::string& only = "",
                                           bool strict = false);

/// Ricci of the ssnm connection on R^(1,0) x_h F with P = d_t.
VerificationReport check_ricci_warped_line(const SpecSet& specs);

/// One of "4.3" ... "4.8".
VerificationReport check_einstein_theorem(const std::string& id, std::uint64_t seed);
const std::vector<std::string>& einstein_theorem_ids();

/// Seeded property checks with `instances` random cases per property.
VerificationReport check_properties(std::uint64_t seed, int instances);

/// Everything above.
VerificationReport check_all(const SpecSet& specs, std::uint64_t seed);

}  // namespace superwarp
