#include "choilab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace choilab {

namespace {

// nlohmann drops non-finite numbers to null; criterion thresholds can be
// infinite (lambda = 0), so encode those as strings.
json finite_or_string(double v) {
  if (std::isfinite(v))
    return v;
  if (std::isnan(v))
    return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_or_string(const json &j) {
  if (j.is_number())
    return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf")
    return std::numeric_limits<double>::infinity();
  if (s == "-inf")
    return -std::numeric_limits<double>::infinity();
  if (s == "nan")
    return std::numeric_limits<double>::quiet_NaN();
  throw Error("expected a number, got: " + s);
}

std::string certainty_name(Certainty c) {
  return c == Certainty::exact ? "exact" : "heuristic-lower-bound";
}

Certainty certainty_from_name(const std::string &s) {
  if (s == "exact")
    return Certainty::exact;
  if (s == "heuristic-lower-bound")
    return Certainty::heuristic_lower_bound;
  throw Error("unknown certainty: " + s);
}

Verdict verdict_from_name(const std::string &s) {
  if (s == "certified-yes")
    return Verdict::certified_yes;
  if (s == "certified-no")
    return Verdict::certified_no;
  if (s == "heuristic-yes")
    return Verdict::heuristic_yes;
  throw Error("unknown verdict: " + s);
}

ConeTag cone_from_name(const std::string &s) {
  if (s == "P")
    return ConeTag::P();
  if (s == "CP")
    return ConeTag::CP();
  if (s == "SP")
    return ConeTag::SP();
  if (s.rfind("Pk(", 0) == 0)
    return ConeTag::Pk(std::stoi(s.substr(3)));
  if (s.rfind("SPk(", 0) == 0)
    return ConeTag::SPk(std::stoi(s.substr(4)));
  throw Error("unknown cone: " + s);
}

DistillOverall overall_from_name(const std::string &s) {
  if (s == "2-positive-certified")
    return DistillOverall::two_positive_certified;
  if (s == "2-positive-heuristic")
    return DistillOverall::two_positive_heuristic;
  if (s == "not-2-positive")
    return DistillOverall::not_two_positive;
  if (s == "inconclusive")
    return DistillOverall::inconclusive;
  throw Error("unknown overall verdict: " + s);
}

} // namespace

json complex_to_json(const cplx &z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json &j) {
  if (!j.is_array() || j.size() != 2)
    throw Error("complex scalar must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const CMatrix &a) {
  json data = json::array();
  for (const cplx &z : a.flat())
    data.push_back(complex_to_json(z));
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json &j) {
  if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error("matrix object needs rows, cols and data");
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  const json &data = j.at("data");
  if (!data.is_array() || data.size() != rows * cols)
    throw Error("matrix data length does not match rows*cols");
  std::vector<cplx> entries;
  entries.reserve(rows * cols);
  for (const json &e : data)
    entries.push_back(complex_from_json(e));
  CMatrix out(rows, cols, std::move(entries));
  if (!out.all_finite())
    throw NumericalFailure("matrix contains non-finite entries");
  return out;
}

json vector_to_json(std::span<const cplx> v) {
  json out = json::array();
  for (const cplx &z : v)
    out.push_back(complex_to_json(z));
  return out;
}

std::vector<cplx> vector_from_json(const json &j) {
  if (!j.is_array())
    throw Error("vector must be an array of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const json &e : j)
    out.push_back(complex_from_json(e));
  return out;
}

json map_to_json(const LinearMap &phi) {
  return json{{"m", phi.in_dim},
              {"n", phi.out_dim},
              {"choi", matrix_to_json(phi.choi)}};
}

LinearMap map_from_json(const json &j) {
  if (!j.contains("m") || !j.contains("n") || !j.contains("choi"))
    throw Error("map object needs m, n and choi");
  LinearMap out{j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>(),
                matrix_from_json(j.at("choi"))};
  if (out.choi.rows() != out.choi_dim() || out.choi.cols() != out.choi_dim())
    throw ShapeMismatch("choi matrix shape does not match m*n");
  return out;
}

json config_to_json(const RunConfig &cfg) {
  return json{{"seed", cfg.seed},
              {"restarts", cfg.restarts},
              {"max_sweeps", cfg.max_sweeps},
              {"improve_tol", cfg.improve_tol},
              {"oracle_cap", cfg.oracle_cap},
              {"oracle_tol", cfg.oracle_tol},
              {"degeneracy_tol", cfg.degeneracy_tol},
              {"safety_margin", cfg.safety_margin},
              {"max_d", cfg.max_d}};
}

RunConfig config_from_json(const json &j) {
  RunConfig cfg;
  for (const auto &[key, value] : j.items()) {
    if (key == "seed")
      cfg.seed = value.get<std::uint64_t>();
    else if (key == "restarts")
      cfg.restarts = value.get<int>();
    else if (key == "max_sweeps")
      cfg.max_sweeps = value.get<int>();
    else if (key == "improve_tol")
      cfg.improve_tol = value.get<double>();
    else if (key == "oracle_cap")
      cfg.oracle_cap = value.get<std::size_t>();
    else if (key == "oracle_tol")
      cfg.oracle_tol = value.get<double>();
    else if (key == "degeneracy_tol")
      cfg.degeneracy_tol = value.get<double>();
    else if (key == "safety_margin")
      cfg.safety_margin = value.get<double>();
    else if (key == "max_d")
      cfg.max_d = value.get<std::size_t>();
    else
      throw Error("unknown config field: " + key);
  }
  cfg.validate();
  return cfg;
}

json norm_result_to_json(const NormResult &r, bool emit_maximizer) {
  json out{{"value", r.value},
           {"signed_sup", r.signed_sup},
           {"certified", certainty_name(r.certified)},
           {"restarts_used", r.restarts_used}};
  if (emit_maximizer && !r.maximizer.empty())
    out["maximizer"] = vector_to_json(r.maximizer);
  if (emit_maximizer && r.maximizer_projection)
    out["maximizer_projection"] = matrix_to_json(*r.maximizer_projection);
  return out;
}

NormResult norm_result_from_json(const json &j) {
  NormResult r;
  r.value = j.at("value").get<double>();
  r.signed_sup = j.at("signed_sup").get<double>();
  r.certified = certainty_from_name(j.at("certified").get<std::string>());
  r.restarts_used = j.at("restarts_used").get<int>();
  if (j.contains("maximizer"))
    r.maximizer = vector_from_json(j.at("maximizer"));
  if (j.contains("maximizer_projection"))
    r.maximizer_projection = matrix_from_json(j.at("maximizer_projection"));
  return r;
}

json schmidt_info_to_json(const SchmidtInfo &s) {
  return json{{"m", s.m},
              {"n", s.n},
              {"singular_values", s.singular_values},
              {"schmidt_rank", s.schmidt_rank}};
}

SchmidtInfo schmidt_info_from_json(const json &j) {
  SchmidtInfo s;
  s.m = j.at("m").get<std::size_t>();
  s.n = j.at("n").get<std::size_t>();
  s.singular_values = j.at("singular_values").get<std::vector<double>>();
  s.schmidt_rank = j.at("schmidt_rank").get<std::size_t>();
  return s;
}

json certificate_to_json(const PositivityCertificate &c) {
  json out{{"verdict", verdict_name(c.verdict)},
           {"margin", finite_or_string(c.margin)},
           {"k", c.k},
           {"tol", c.tol}};
  if (c.witness)
    out["witness"] = vector_to_json(*c.witness);
  return out;
}

PositivityCertificate certificate_from_json(const json &j) {
  PositivityCertificate c;
  c.verdict = verdict_from_name(j.at("verdict").get<std::string>());
  c.margin = number_or_string(j.at("margin"));
  c.k = j.at("k").get<int>();
  c.tol = j.at("tol").get<double>();
  if (j.contains("witness"))
    c.witness = vector_from_json(j.at("witness"));
  return c;
}

json compression_report_to_json(const CompressionReport &r) {
  json out{{"k", r.k},
           {"samples", r.samples},
           {"failures_left", r.failures_left},
           {"failures_right", r.failures_right},
           {"failures_both", r.failures_both},
           {"deterministic_candidate_failed", r.deterministic_candidate_failed},
           {"blockpos_verdict", verdict_name(r.blockpos_verdict)},
           {"agreement", r.agreement},
           {"any_failure", r.any_failure()}};
  if (r.first_failing_sample)
    out["first_failing_sample"] = *r.first_failing_sample;
  return out;
}

CompressionReport compression_report_from_json(const json &j) {
  CompressionReport r;
  r.k = j.at("k").get<int>();
  r.samples = j.at("samples").get<int>();
  r.failures_left = j.at("failures_left").get<int>();
  r.failures_right = j.at("failures_right").get<int>();
  r.failures_both = j.at("failures_both").get<int>();
  r.deterministic_candidate_failed =
      j.at("deterministic_candidate_failed").get<bool>();
  r.blockpos_verdict =
      verdict_from_name(j.at("blockpos_verdict").get<std::string>());
  r.agreement = j.at("agreement").get<bool>();
  if (j.contains("first_failing_sample"))
    r.first_failing_sample = j.at("first_failing_sample").get<int>();
  return r;
}

json witness_report_to_json(const WitnessReport &w) {
  json records = json::array();
  for (const ViolationRecord &v : w.certificates)
    records.push_back(
        json{{"sample", v.sample}, {"expectation", v.expectation}});
  return json{{"cone", w.cone.name()},
              {"mu", w.mu},
              {"lambda", w.lambda},
              {"rank_e", w.rank_e},
              {"bound_ok", w.bound_ok},
              {"e", matrix_to_json(w.e)},
              {"witness_choi", matrix_to_json(w.witness_choi)},
              {"worst_expectation", finite_or_string(w.worst_expectation)},
              {"violations", std::move(records)},
              {"blockpos_verdict", verdict_name(w.blockpos_verdict)},
              {"blockpos_disagrees", w.blockpos_disagrees},
              {"closest_admissible_state",
               vector_to_json(w.closest_admissible_state)}};
}

WitnessReport witness_report_from_json(const json &j) {
  WitnessReport w;
  w.cone = cone_from_name(j.at("cone").get<std::string>());
  w.mu = j.at("mu").get<double>();
  w.lambda = j.at("lambda").get<double>();
  w.rank_e = j.at("rank_e").get<std::size_t>();
  w.bound_ok = j.at("bound_ok").get<bool>();
  w.e = matrix_from_json(j.at("e"));
  w.witness_choi = matrix_from_json(j.at("witness_choi"));
  w.worst_expectation = number_or_string(j.at("worst_expectation"));
  for (const json &rec : j.at("violations"))
    w.certificates.push_back(
        {rec.at("sample").get<int>(), rec.at("expectation").get<double>()});
  w.blockpos_verdict =
      verdict_from_name(j.at("blockpos_verdict").get<std::string>());
  w.blockpos_disagrees = j.at("blockpos_disagrees").get<bool>();
  w.closest_admissible_state =
      vector_from_json(j.at("closest_admissible_state"));
  return w;
}

json entanglement_evidence_to_json(const EntanglementEvidence &e) {
  return json{{"completely_entangled", e.completely_entangled},
              {"best_overlap", e.best_overlap},
              {"certified", e.certified},
              {"rank_e", e.rank_e},
              {"rank_bound", e.rank_bound},
              {"best_product_vector", vector_to_json(e.best_product_vector)}};
}

EntanglementEvidence entanglement_evidence_from_json(const json &j) {
  EntanglementEvidence e;
  e.completely_entangled = j.at("completely_entangled").get<bool>();
  e.best_overlap = j.at("best_overlap").get<double>();
  e.certified = j.at("certified").get<bool>();
  e.rank_e = j.at("rank_e").get<std::size_t>();
  e.rank_bound = j.at("rank_bound").get<std::size_t>();
  e.best_product_vector = vector_from_json(j.at("best_product_vector"));
  return e;
}

json support_bound_to_json(const SupportBoundReport &r) {
  return json{{"ok", r.ok}, {"rank_neg", r.rank_neg}, {"bound", r.bound}};
}

SupportBoundReport support_bound_from_json(const json &j) {
  SupportBoundReport r;
  r.ok = j.at("ok").get<bool>();
  r.rank_neg = j.at("rank_neg").get<std::size_t>();
  r.bound = j.at("bound").get<std::size_t>();
  return r;
}

json criterion_to_json(const CriterionRecord &c) {
  return json{{"name", c.name},
              {"threshold", finite_or_string(c.threshold)},
              {"value", c.value},
              {"fired", c.fired},
              {"certified", c.certified},
              {"norm_certainty", certainty_name(c.norm_certainty)}};
}

CriterionRecord criterion_from_json(const json &j) {
  CriterionRecord c;
  c.name = j.at("name").get<std::string>();
  c.threshold = number_or_string(j.at("threshold"));
  c.value = j.at("value").get<double>();
  c.fired = j.at("fired").get<bool>();
  c.certified = j.at("certified").get<bool>();
  c.norm_certainty =
      certainty_from_name(j.at("norm_certainty").get<std::string>());
  return c;
}

json distill_report_to_json(const DistillReport &r) {
  json criteria = json::array();
  for (const CriterionRecord &c : r.criteria)
    criteria.push_back(criterion_to_json(c));
  json out{{"lambda", r.lambda},
           {"n_copies", r.n_copies},
           {"criteria", std::move(criteria)},
           {"overall", distill_overall_name(r.overall)},
           {"V", matrix_to_json(r.v)}};
  if (r.blockpos)
    out["blockpos"] = certificate_to_json(*r.blockpos);
  return out;
}

DistillReport distill_report_from_json(const json &j) {
  DistillReport r;
  r.lambda = j.at("lambda").get<double>();
  r.n_copies = j.at("n_copies").get<int>();
  for (const json &c : j.at("criteria"))
    r.criteria.push_back(criterion_from_json(c));
  r.overall = overall_from_name(j.at("overall").get<std::string>());
  r.v = matrix_from_json(j.at("V"));
  if (j.contains("blockpos"))
    r.blockpos = certificate_from_json(j.at("blockpos"));
  return r;
}

json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

CMatrix load_matrix_file(const std::string &path) {
  return matrix_from_json(load_json_file(path));
}

LinearMap load_map_file(const std::string &path) {
  return map_from_json(load_json_file(path));
}

} // namespace choilab
