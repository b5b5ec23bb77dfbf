#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "choilab/json_io.hpp"
#include "choilab/kernels.hpp"

namespace {

using namespace choilab;

// Verdict classes map onto the exit code protocol:
// 0 yes/ok, 1 usage, 2 certified-negative, 3 heuristic, 4 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNo = 2;
constexpr int kExitHeuristic = 3;
constexpr int kExitNumerical = 4;

struct GlobalOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

RunConfig resolve_config(const GlobalOpts &g) {
  RunConfig cfg;
  bool seed_in_file = false;
  if (!g.config_path.empty()) {
    const json j = load_json_file(g.config_path);
    cfg = config_from_json(j);
    seed_in_file = j.contains("seed");
  }
  if (g.seed) {
    cfg.seed = *g.seed;
  } else if (!seed_in_file) {
    if (const char *env = std::getenv("CHOI_LAB_SEED"))
      cfg.seed = std::strtoull(env, nullptr, 10);
  }
  if (g.threads != 0)
    set_max_threads(g.threads);
  return cfg;
}

void emit(json doc, const std::string &command) {
  json out{{"schema", kSchemaTag}, {"command", command}};
  out.update(doc);
  std::cout << out.dump(2) << "\n";
}

int exit_for_verdict(Verdict v) {
  switch (v) {
  case Verdict::certified_yes:
    return kExitOk;
  case Verdict::certified_no:
    return kExitNo;
  case Verdict::heuristic_yes:
    return kExitHeuristic;
  }
  return kExitNumerical;
}

ConeTag parse_cone(const std::string &name, int k) {
  if (name == "P")
    return ConeTag::P();
  if (name == "Pk")
    return ConeTag::Pk(k);
  if (name == "CP")
    return ConeTag::CP();
  if (name == "SP")
    return ConeTag::SP();
  if (name == "SPk")
    return ConeTag::SPk(k);
  throw Error("unknown cone: " + name);
}

struct LambdaGrid {
  double start = 0.0, stop = 0.0, step = 0.0;
};

LambdaGrid parse_grid(const std::string &spec) {
  LambdaGrid g;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &g.start, &g.stop, &g.step) != 3 ||
      g.step <= 0.0 || g.stop < g.start)
    throw Error("lambda grid must be start:stop:step with step > 0");
  return g;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

//=========================================================================
// Subcommand bodies
//=========================================================================

int run_choi(const std::string &adv_path, const std::string &kraus_path,
             bool trace_flag, std::size_t m, std::size_t n,
             std::optional<double> lambda) {
  LinearMap map;
  if (trace_flag) {
    if (m == 0 || n == 0)
      throw Error("--trace needs --m and --n");
    if (lambda)
      throw Error("--lambda applies to --ad-v or --kraus inputs");
    map = trace_map(m, n);
  } else if (!adv_path.empty()) {
    map = ad_v_choi(load_matrix_file(adv_path));
  } else if (!kraus_path.empty()) {
    const json j = load_json_file(kraus_path);
    const json &arr = j.is_array() ? j : j.at("kraus");
    std::vector<CMatrix> ops;
    for (const json &e : arr)
      ops.push_back(matrix_from_json(e));
    map = kraus_choi(ops);
  } else {
    throw Error("choi needs one of --ad-v, --kraus, --trace");
  }
  if (lambda)
    map = phi_lambda(map, *lambda);
  emit(map_to_json(map), "choi");
  return kExitOk;
}

int run_apply(const std::string &map_path, const std::string &x_path) {
  const LinearMap map = load_map_file(map_path);
  const CMatrix x = load_matrix_file(x_path);
  emit(json{{"result", matrix_to_json(apply_map(map, x))}}, "apply");
  return kExitOk;
}

int run_kyfan(const std::string &v_path, int k, bool with_proj) {
  const CMatrix v = load_matrix_file(v_path);
  const NormResult r = ky_fan_sq(v, k);
  json doc{{"k", k}, {"value", r.value}};
  if (with_proj) {
    const NormResult p = ky_fan_proj(v, k);
    doc["value_proj"] = p.value;
    if (p.maximizer_projection)
      doc["maximizer_projection"] = matrix_to_json(*p.maximizer_projection);
  }
  emit(doc, "kyfan");
  return kExitOk;
}

int run_schmidt_norm(const std::string &a_path, std::size_t m, std::size_t n,
                     int k, bool emit_max, const RunConfig &cfg) {
  const CMatrix a = load_matrix_file(a_path);
  const NormResult r = schmidt_op_norm(a, m, n, k, cfg);
  json doc = norm_result_to_json(r, emit_max);
  doc["m"] = m;
  doc["n"] = n;
  doc["k"] = k;
  emit(doc, "schmidt-norm");
  return r.certified == Certainty::exact ? kExitOk : kExitHeuristic;
}

int run_kpos(const std::string &map_path, int k, const std::string &family_path,
             std::optional<double> lambda, const RunConfig &cfg) {
  PositivityCertificate cert;
  if (!family_path.empty()) {
    if (!lambda)
      throw Error("--lambda-family needs --lambda");
    cert = is_k_positive_phi_lambda(load_matrix_file(family_path), *lambda, k);
  } else if (!map_path.empty()) {
    const LinearMap map = load_map_file(map_path);
    cert = is_k_block_positive(map.choi, map.in_dim, map.out_dim, k, cfg);
  } else {
    throw Error("kpos needs --map or --lambda-family");
  }
  emit(certificate_to_json(cert), "kpos");
  return exit_for_verdict(cert.verdict);
}

int run_blockpos(const std::string &a_path, std::size_t m, std::size_t n, int k,
                 const RunConfig &cfg) {
  const CMatrix a = load_matrix_file(a_path);
  const PositivityCertificate cert = is_k_block_positive(a, m, n, k, cfg);
  emit(certificate_to_json(cert), "blockpos");
  return exit_for_verdict(cert.verdict);
}

int run_witness(const std::string &proj_path, std::size_t m, std::size_t n,
                const std::string &cone_name, int k, int samples,
                const RunConfig &cfg) {
  const CMatrix e = load_matrix_file(proj_path);
  const ConeTag cone = parse_cone(cone_name, k);
  const WitnessReport report = build_witness(e, m, n, cone, cfg, samples);
  emit(witness_report_to_json(report), "witness");
  if (report.blockpos_disagrees)
    return kExitHeuristic;
  return kExitOk;
}

int run_centangled(const std::string &proj_path, std::size_t m, std::size_t n,
                   const RunConfig &cfg) {
  const CMatrix e = load_matrix_file(proj_path);
  const EntanglementEvidence ev = is_completely_entangled(e, m, n, cfg);
  emit(entanglement_evidence_to_json(ev), "centangled");
  if (!ev.completely_entangled)
    return kExitNo;
  return ev.certified ? kExitOk : kExitHeuristic;
}

int run_supportbound(const std::string &map_path, int k) {
  const LinearMap map = load_map_file(map_path);
  const SupportBoundReport r = check_support_bound(map, k);
  emit(support_bound_to_json(r), "supportbound");
  return r.ok ? kExitOk : kExitNo;
}

int run_distill(const std::string &v_path, double lambda, int copies,
                const RunConfig &cfg) {
  const CMatrix v = load_matrix_file(v_path);
  const DistillReport report = distill_report(v, lambda, copies, cfg);
  emit(distill_report_to_json(report), "distill");
  switch (report.overall) {
  case DistillOverall::two_positive_certified:
    return kExitOk;
  case DistillOverall::not_two_positive:
    return kExitNo;
  default:
    return kExitHeuristic;
  }
}

int run_sweep(const std::string &family, const std::string &v_path,
              std::size_t d, const std::string &grid_spec, int copies,
              bool with_blockpos, const RunConfig &cfg) {
  CMatrix v;
  if (!v_path.empty()) {
    v = load_matrix_file(v_path);
  } else if (family == "max-entangled") {
    if (d < 2)
      throw Error("--d must be at least 2");
    v = CMatrix::identity(d);
    v *= cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0);
  } else {
    throw Error("unknown family: " + family + " (try max-entangled or --V)");
  }
  if (copies != 1 && copies != 2)
    throw Error("--copies must be 1 or 2");
  const LambdaGrid grid = parse_grid(grid_spec);

  const double kf1 = ky_fan_sq(v, 1).value;
  const double kf2 = ky_fan_sq(v, 2).value;
  // The two-copy pair norm does not depend on lambda; evaluate it once.
  NormResult pair_norm;
  if (copies == 2)
    pair_norm = two_copy_pair_norm(v, cfg);

  std::cout << "lambda,one_copy_two_positive,pair_norm_value,pair_fired,"
               "pair_certified,four_s1_value,four_s1_fired,one_positive_fired,"
               "blockpos_verdict,blockpos_margin,overall\n";

  const int steps =
      static_cast<int>(std::floor((grid.stop - grid.start) / grid.step + 1e-9));
  for (int t = 0; t <= steps; ++t) {
    const double lambda = grid.start + grid.step * t;
    const bool one_copy_ok = lambda * kf2 <= 1.0 + 1e-12;
    std::string row = fmt17(lambda) + "," + (one_copy_ok ? "yes" : "no");
    if (copies == 1) {
      row += ",,,,,,,,";
      row += one_copy_ok ? "2-positive-certified" : "not-2-positive";
      std::cout << row << "\n";
      continue;
    }

    const double threshold = lambda > 0 ? 1.0 / lambda
                                        : std::numeric_limits<double>::infinity();
    const bool pair_fired = threshold >= pair_norm.value;
    const bool pair_cert =
        pair_fired && (pair_norm.certified == Certainty::exact ||
                     threshold >= pair_norm.value + cfg.safety_margin);
    const bool four_s1_fired = (4.0 * lambda) * kf1 <= 1.0 + 1e-12;
    const bool one_positive_fired =
        is_k_positive_phi_lambda(v, 4.0 * lambda, 1).verdict ==
        Verdict::certified_yes;

    std::string bp_verdict = "skipped";
    std::string bp_margin;
    std::optional<PositivityCertificate> block;
    if (with_blockpos) {
      const LinearMap doubled = tensor_power_map(phi_lambda_ad_v(v, lambda), 2);
      block = is_k_block_positive(doubled.choi, v.cols() * v.cols(),
                                  v.rows() * v.rows(), 2, cfg);
      bp_verdict = verdict_name(block->verdict);
      bp_margin = fmt17(block->margin);
    }

    std::string overall;
    const bool any_fired = pair_fired || four_s1_fired || one_positive_fired;
    const bool any_cert = pair_cert || four_s1_fired || one_positive_fired;
    if (any_cert)
      overall = "2-positive-certified";
    else if (any_fired)
      overall = "2-positive-heuristic";
    else if (block && block->verdict == Verdict::certified_no)
      overall = "not-2-positive";
    else if (block && block->verdict == Verdict::certified_yes)
      overall = "2-positive-certified";
    else if (block)
      overall = "2-positive-heuristic";
    else
      overall = "inconclusive";

    row += "," + fmt17(pair_norm.value) + "," + (pair_fired ? "yes" : "no") + "," +
           (pair_cert ? "yes" : "no") + "," + fmt17(4.0 * kf1) + "," +
           (four_s1_fired ? "yes" : "no") + "," + (one_positive_fired ? "yes" : "no") + "," +
           bp_verdict + "," + bp_margin + "," + overall;
    std::cout << row << "\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Choi matrix calculus: cone norms, positivity certificates, "
               "entanglement witnesses and distillability reports"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--config", global.config_path, "RunConfig JSON file");
  app.add_option("--seed", global.seed, "base seed (overrides config and env)");
  app.add_option("--threads", global.threads, "worker cap (0 = default)");

  // choi
  std::string adv_path, kraus_path;
  bool trace_flag = false;
  std::size_t choi_m = 0, choi_n = 0;
  std::optional<double> choi_lambda;
  auto *c_choi = app.add_subcommand("choi", "build a map in Choi form");
  c_choi->add_option("--ad-v", adv_path, "Kraus operator file for Ad_V");
  c_choi->add_option("--kraus", kraus_path, "JSON array of Kraus operators");
  c_choi->add_flag("--trace", trace_flag, "the trace map");
  c_choi->add_option("--m", choi_m, "input dimension (with --trace)");
  c_choi->add_option("--n", choi_n, "output dimension (with --trace)");
  c_choi->add_option("--lambda", choi_lambda, "wrap as Tr - lambda * map");

  // apply
  std::string apply_map_path, apply_x_path;
  auto *c_apply = app.add_subcommand("apply", "apply a map to a matrix");
  c_apply->add_option("--map", apply_map_path)->required();
  c_apply->add_option("--x", apply_x_path)->required();

  // kyfan
  std::string kyfan_v;
  int kyfan_k = 1;
  bool kyfan_proj = false;
  auto *c_kyfan = app.add_subcommand("kyfan", "squared Ky Fan norm of V");
  c_kyfan->add_option("--V", kyfan_v)->required();
  c_kyfan->add_option("--k", kyfan_k)->required();
  c_kyfan->add_flag("--proj", kyfan_proj, "also report the projection formulation");

  // schmidt-norm
  std::string sn_a;
  std::size_t sn_m = 0, sn_n = 0;
  int sn_k = 1;
  bool sn_emit = false;
  auto *c_sn = app.add_subcommand("schmidt-norm", "Schmidt operator norm");
  c_sn->add_option("--A", sn_a)->required();
  c_sn->add_option("--m", sn_m)->required();
  c_sn->add_option("--n", sn_n)->required();
  c_sn->add_option("--k", sn_k)->required();
  c_sn->add_flag("--emit-maximizer", sn_emit);

  // kpos
  std::string kpos_map, kpos_family;
  int kpos_k = 1;
  std::optional<double> kpos_lambda;
  auto *c_kpos = app.add_subcommand("kpos", "k-positivity certificate");
  c_kpos->add_option("--map", kpos_map);
  c_kpos->add_option("--k", kpos_k)->required();
  c_kpos->add_option("--lambda-family", kpos_family,
                     "V file: test Tr - lambda Ad_V exactly");
  c_kpos->add_option("--lambda", kpos_lambda);

  // blockpos
  std::string bp_a;
  std::size_t bp_m = 0, bp_n = 0;
  int bp_k = 1;
  auto *c_bp = app.add_subcommand("blockpos", "k-block positivity of a matrix");
  c_bp->add_option("--A", bp_a)->required();
  c_bp->add_option("--m", bp_m)->required();
  c_bp->add_option("--n", bp_n)->required();
  c_bp->add_option("--k", bp_k)->required();

  // witness
  std::string wit_proj, wit_cone = "P";
  std::size_t wit_m = 0, wit_n = 0;
  int wit_k = 1, wit_samples = 500;
  auto *c_wit = app.add_subcommand("witness", "witness from a projection");
  c_wit->add_option("--proj", wit_proj)->required();
  c_wit->add_option("--m", wit_m)->required();
  c_wit->add_option("--n", wit_n)->required();
  c_wit->add_option("--cone", wit_cone, "P or Pk");
  c_wit->add_option("--k", wit_k, "k for cone Pk");
  c_wit->add_option("--samples", wit_samples, "states sampled inside e");

  // centangled
  std::string ce_proj;
  std::size_t ce_m = 0, ce_n = 0;
  auto *c_ce = app.add_subcommand("centangled",
                                  "is the projection range completely entangled");
  c_ce->add_option("--proj", ce_proj)->required();
  c_ce->add_option("--m", ce_m)->required();
  c_ce->add_option("--n", ce_n)->required();

  // supportbound
  std::string sb_map;
  int sb_k = 1;
  auto *c_sb = app.add_subcommand("supportbound",
                                  "negative-part support dimension bound");
  c_sb->add_option("--map", sb_map)->required();
  c_sb->add_option("--k", sb_k)->required();

  // distill
  std::string di_v;
  double di_lambda = 0.0;
  int di_copies = 1;
  auto *c_di = app.add_subcommand("distill", "n-copy undistillability report");
  c_di->add_option("--V", di_v)->required();
  c_di->add_option("--lambda", di_lambda)->required();
  c_di->add_option("--copies", di_copies)->required();

  // sweep-distill
  std::string sw_family = "max-entangled", sw_v, sw_grid;
  std::size_t sw_d = 0;
  int sw_copies = 2;
  bool sw_blockpos = false;
  auto *c_sw = app.add_subcommand("sweep-distill", "CSV sweep over lambda");
  c_sw->add_option("--family", sw_family, "max-entangled (V = 1/sqrt(d))");
  c_sw->add_option("--V", sw_v, "explicit V file (overrides --family)");
  c_sw->add_option("--d", sw_d, "dimension for --family");
  c_sw->add_option("--lambda-grid", sw_grid, "start:stop:step")->required();
  c_sw->add_option("--copies", sw_copies);
  c_sw->add_flag("--blockpos", sw_blockpos, "run the see-saw per grid point");

  // allow the global options after a subcommand name as well
  for (CLI::App *sub : app.get_subcommands({}))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e); // prints help or the parse message
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const RunConfig cfg = resolve_config(global);
    if (c_choi->parsed())
      return run_choi(adv_path, kraus_path, trace_flag, choi_m, choi_n,
                      choi_lambda);
    if (c_apply->parsed())
      return run_apply(apply_map_path, apply_x_path);
    if (c_kyfan->parsed())
      return run_kyfan(kyfan_v, kyfan_k, kyfan_proj);
    if (c_sn->parsed())
      return run_schmidt_norm(sn_a, sn_m, sn_n, sn_k, sn_emit, cfg);
    if (c_kpos->parsed())
      return run_kpos(kpos_map, kpos_k, kpos_family, kpos_lambda, cfg);
    if (c_bp->parsed())
      return run_blockpos(bp_a, bp_m, bp_n, bp_k, cfg);
    if (c_wit->parsed())
      return run_witness(wit_proj, wit_m, wit_n, wit_cone, wit_k, wit_samples,
                         cfg);
    if (c_ce->parsed())
      return run_centangled(ce_proj, ce_m, ce_n, cfg);
    if (c_sb->parsed())
      return run_supportbound(sb_map, sb_k);
    if (c_di->parsed())
      return run_distill(di_v, di_lambda, di_copies, cfg);
    if (c_sw->parsed())
      return run_sweep(sw_family, sw_v, sw_d, sw_grid, sw_copies, sw_blockpos,
                       cfg);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const Degenerate &e) {
    emit(json{{"error", "degenerate"}, {"message", e.what()}}, "error");
    return kExitNo;
  } catch (const NumericalFailure &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
