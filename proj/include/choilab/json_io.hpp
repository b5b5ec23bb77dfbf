#ifndef CHOILAB_JSON_IO_HPP
#define CHOILAB_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "choilab/choi.hpp"
#include "choilab/cmatrix.hpp"
#include "choilab/config.hpp"
#include "choilab/entanglement.hpp"
#include "choilab/norms.hpp"
#include "choilab/positivity.hpp"
#include "choilab/tensor_distill.hpp"

namespace choilab {

// Insertion-ordered documents keep output byte-stable across runs.
using json = nlohmann::ordered_json;

inline constexpr const char *kSchemaTag = "choi-lab/1";

// Complex scalars encode as [re, im]; matrices as
// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
json complex_to_json(const cplx &z);
cplx complex_from_json(const json &j);

json matrix_to_json(const CMatrix &a);
CMatrix matrix_from_json(const json &j);

json vector_to_json(std::span<const cplx> v);
std::vector<cplx> vector_from_json(const json &j);

// Map format: {"m": int, "n": int, "choi": <matrix>}.
json map_to_json(const LinearMap &phi);
LinearMap map_from_json(const json &j);

json config_to_json(const RunConfig &cfg);
// Missing fields keep their defaults; unknown fields are an error.
RunConfig config_from_json(const json &j);

// Reports and certificates round-trip: every *_to_json document parses back
// into the emitting type.
json norm_result_to_json(const NormResult &r, bool emit_maximizer = false);
NormResult norm_result_from_json(const json &j);
json schmidt_info_to_json(const SchmidtInfo &s);
SchmidtInfo schmidt_info_from_json(const json &j);
json certificate_to_json(const PositivityCertificate &c);
PositivityCertificate certificate_from_json(const json &j);
json compression_report_to_json(const CompressionReport &r);
CompressionReport compression_report_from_json(const json &j);
json witness_report_to_json(const WitnessReport &w);
WitnessReport witness_report_from_json(const json &j);
json entanglement_evidence_to_json(const EntanglementEvidence &e);
EntanglementEvidence entanglement_evidence_from_json(const json &j);
json support_bound_to_json(const SupportBoundReport &r);
SupportBoundReport support_bound_from_json(const json &j);
json criterion_to_json(const CriterionRecord &c);
CriterionRecord criterion_from_json(const json &j);
json distill_report_to_json(const DistillReport &r);
DistillReport distill_report_from_json(const json &j);

json load_json_file(const std::string &path);
CMatrix load_matrix_file(const std::string &path);
LinearMap load_map_file(const std::string &path);

} // namespace choilab

#endif
