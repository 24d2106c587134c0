// repbasis command-line front end.  Links the C API only; owns the CSV/JSON
// report schemas.  Same argv + same config file => byte-identical output.
#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "repbasis.h"

namespace {

using nlohmann::json;

// ---- numeric formatting: 17 significant digits, round-trip safe ----------

std::string num(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string num(std::uint64_t v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%" PRIu64, v);
  return buffer;
}

std::string num(std::int64_t v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%" PRId64, v);
  return buffer;
}

// ---- tiny deterministic JSON writer ---------------------------------------

class JsonWriter {
 public:
  void begin_object() { separate(); out_ += '{'; fresh_ = true; }
  void end_object() { out_ += '}'; fresh_ = false; }
  void begin_array() { separate(); out_ += '['; fresh_ = true; }
  void end_array() { out_ += ']'; fresh_ = false; }

  void key(const std::string& name) {
    separate();
    out_ += '"';
    out_ += name;
    out_ += "\": ";
    pending_value_ = true;
  }

  void value(const std::string& text) { separate(); out_ += '"'; out_ += text; out_ += '"'; }
  void value(const char* text) { value(std::string(text)); }
  void value(double v) { separate(); out_ += num(v); }
  void value(std::uint64_t v) { separate(); out_ += num(v); }
  void value(std::int64_t v) { separate(); out_ += num(v); }
  void value(int v) { separate(); out_ += num(static_cast<std::int64_t>(v)); }
  void value(bool v) { separate(); out_ += v ? "true" : "false"; }
  void null() { separate(); out_ += "null"; }
  void raw(const std::string& text) { separate(); out_ += text; }

  template <typename T>
  void kv(const std::string& name, T v) { key(name); value(v); }

  const std::string& str() const { return out_; }

 private:
  void separate() {
    if (pending_value_) { pending_value_ = false; return; }
    if (!fresh_) out_ += ", ";
    fresh_ = false;
  }

  std::string out_;
  bool fresh_ = true;
  bool pending_value_ = false;
};

// ---- options ---------------------------------------------------------------

struct Options {
  std::int64_t n = 1000;
  int k = 2;
  double alpha = 0.5;
  double eta = 0.5;
  double eps = 0.5;
  double xi = 0.1;
  double lambda = 1.0;
  double a_const = 0.0;

  std::string rule;  // empty = pick thm21/thm31 by k
  double p = -1.0;   // raw inclusion probability when >= 0
  double coeff = 1.0;

  std::string band = "proof";
  double c_lo = 0.5;
  double c_hi = 4.0;
  double target_gamma = 1.0;
  double target_lambda = 1.0;

  std::int64_t trials = 100;
  std::uint64_t seed = 0;
  std::string j_strategy = "auto";
  int sampled_js = 0;
  bool packing = false;
  std::string threads = "";

  std::string out;
  std::string format = "csv";

  std::string set;
  std::string mode = "distinct";
  std::int64_t j = -1;
  std::string a_grid = "-4,0,4";
  std::string n_grid = "1000,10000,100000";
  std::int64_t instances = 200;
  std::int64_t max_n = 30;
  double c_j = -1.0;
  double med = -1.0;
  double t_param = -1.0;
};

const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "n", "k", "alpha", "eta", "eps", "xi", "lambda", "a_const",
      "rule", "p", "K", "band", "c_lo", "c_hi", "target_gamma",
      "target_lambda", "trials", "seed", "j_strategy", "sampled_js",
      "packing", "threads", "out", "format", "set", "mode", "j",
      "a_grid", "n_grid", "instances", "max_n", "c_j", "med", "t"};
  return keys;
}

std::string join_csv(const json& array) {
  std::string out;
  for (const auto& v : array) {
    if (!out.empty()) out += ',';
    if (v.is_number_integer()) out += num(static_cast<std::int64_t>(v.get<std::int64_t>()));
    else out += num(v.get<double>());
  }
  return out;
}

// Loads the JSON config into the option defaults; flags parsed afterwards
// override these values.  Unknown keys are usage errors.
void load_config(const std::string& path, Options& opt) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw CLI::ValidationError("--config", std::string("bad JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw CLI::ValidationError("--config", "top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_config_keys().count(key))
      throw CLI::ValidationError("--config", "unknown key: " + key);
    if (key == "n") opt.n = value.get<std::int64_t>();
    else if (key == "k") opt.k = value.get<int>();
    else if (key == "alpha") opt.alpha = value.get<double>();
    else if (key == "eta") opt.eta = value.get<double>();
    else if (key == "eps") opt.eps = value.get<double>();
    else if (key == "xi") opt.xi = value.get<double>();
    else if (key == "lambda") opt.lambda = value.get<double>();
    else if (key == "a_const") opt.a_const = value.get<double>();
    else if (key == "rule") opt.rule = value.get<std::string>();
    else if (key == "p") opt.p = value.get<double>();
    else if (key == "K") opt.coeff = value.get<double>();
    else if (key == "band") opt.band = value.get<std::string>();
    else if (key == "c_lo") opt.c_lo = value.get<double>();
    else if (key == "c_hi") opt.c_hi = value.get<double>();
    else if (key == "target_gamma") opt.target_gamma = value.get<double>();
    else if (key == "target_lambda") opt.target_lambda = value.get<double>();
    else if (key == "trials") opt.trials = value.get<std::int64_t>();
    else if (key == "seed") opt.seed = value.get<std::uint64_t>();
    else if (key == "j_strategy") opt.j_strategy = value.get<std::string>();
    else if (key == "sampled_js") opt.sampled_js = value.get<int>();
    else if (key == "packing") opt.packing = value.get<bool>();
    else if (key == "threads") {
      if (value.is_string()) opt.threads = value.get<std::string>();
      else opt.threads = num(static_cast<std::int64_t>(value.get<std::int64_t>()));
    } else if (key == "out") opt.out = value.get<std::string>();
    else if (key == "format") opt.format = value.get<std::string>();
    else if (key == "set") {
      if (value.is_string()) opt.set = value.get<std::string>();
      else opt.set = join_csv(value);
    } else if (key == "mode") opt.mode = value.get<std::string>();
    else if (key == "j") opt.j = value.get<std::int64_t>();
    else if (key == "a_grid") {
      opt.a_grid = value.is_string() ? value.get<std::string>() : join_csv(value);
    } else if (key == "n_grid") {
      opt.n_grid = value.is_string() ? value.get<std::string>() : join_csv(value);
    } else if (key == "instances") opt.instances = value.get<std::int64_t>();
    else if (key == "max_n") opt.max_n = value.get<std::int64_t>();
    else if (key == "c_j") opt.c_j = value.get<double>();
    else if (key == "med") opt.med = value.get<double>();
    else if (key == "t") opt.t_param = value.get<double>();
  }
}

int resolve_threads(const Options& opt) {
  std::string value = opt.threads;
  if (value.empty()) {
    const char* env = std::getenv("REPBASIS_THREADS");
    if (env) value = env;
  }
  if (value.empty() || value == "auto") return 0;
  return std::max(0, std::atoi(value.c_str()));
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) out.push_back(std::strtod(token.c_str(), nullptr));
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) out.push_back(std::strtoll(token.c_str(), nullptr, 10));
  }
  return out;
}

// ---- error plumbing ---------------------------------------------------------

struct CliError {
  rb_status status;
  std::string message;
};

[[noreturn]] void raise(rb_status status) {
  throw CliError{status, rb_last_error_message()};
}

void check(rb_status status) {
  if (status != RB_OK) raise(status);
}

bool is_validation_error(rb_status status) {
  switch (status) {
    case RB_ERR_INVALID_ARGUMENT:
    case RB_ERR_ALPHA_OUT_OF_RANGE:
    case RB_ERR_K_TOO_SMALL:
    case RB_ERR_N_TOO_SMALL:
    case RB_ERR_ETA_NEGATIVE:
    case RB_ERR_EPS_NEGATIVE:
    case RB_ERR_XI_NOT_POSITIVE:
    case RB_ERR_LAMBDA_NOT_POSITIVE:
    case RB_ERR_XI_EPS_CONSTRAINT:
    case RB_ERR_P_OUT_OF_RANGE:
    case RB_ERR_MEMBERS_INVALID:
    case RB_ERR_TRIALS_TOO_SMALL:
      return true;
    default:
      return false;
  }
}

// ---- shared builders ---------------------------------------------------------

rb_params make_params(const Options& opt) {
  rb_params params;
  rb_params_init(&params, opt.n);
  params.k = opt.k;
  params.alpha = opt.alpha;
  params.eta = opt.eta;
  params.eps = opt.eps;
  params.xi = opt.xi;
  params.lambda = opt.lambda;
  params.a_const = opt.a_const;
  return params;
}

std::string effective_rule_name(const Options& opt) {
  if (opt.p >= 0.0) return "raw";
  if (!opt.rule.empty()) return opt.rule;
  return opt.k == 2 ? "thm21" : "thm31";
}

rb_rule make_rule(const Options& opt) {
  rb_rule rule;
  std::memset(&rule, 0, sizeof(rule));
  rule.alpha = opt.alpha;
  rule.eta = opt.eta;
  rule.eps = opt.eps;
  rule.a_const = opt.a_const;
  rule.coeff = opt.coeff;
  rule.k = opt.k;
  const std::string name = effective_rule_name(opt);
  if (name == "thm21") rule.tag = RB_RULE_THM21;
  else if (name == "thm31") rule.tag = RB_RULE_THM31;
  else if (name == "av2") rule.tag = RB_RULE_AV2;
  else if (name == "avk") rule.tag = RB_RULE_AVK;
  else if (name == "logpower") rule.tag = RB_RULE_LOGPOWER;
  else if (name == "raw") {
    rule.tag = RB_RULE_RAW;
    rule.p = opt.p >= 0.0 ? opt.p : 0.0;
  } else {
    throw CLI::ValidationError("--rule", "unknown rule: " + name);
  }
  return rule;
}

rb_band make_band(const Options& opt) {
  rb_band band;
  rb_band_init(&band);
  if (opt.band == "fixed") band.mode = RB_BAND_FIXED;
  else if (opt.band == "proof") band.mode = RB_BAND_PROOF;
  else throw CLI::ValidationError("--band", "unknown band mode: " + opt.band);
  band.c_lo = opt.c_lo;
  band.c_hi = opt.c_hi;
  band.target_gamma = opt.target_gamma;
  band.target_lambda = opt.target_lambda;
  return band;
}

int32_t make_mode(const Options& opt) {
  if (opt.mode == "distinct") return RB_COUNT_DISTINCT;
  if (opt.mode == "multiset") return RB_COUNT_MULTISET;
  throw CLI::ValidationError("--mode", "unknown mode: " + opt.mode);
}

struct SampleHandle {
  rb_sample* ptr = nullptr;
  ~SampleHandle() { rb_sample_free(ptr); }
};

// Builds the working sample: an explicit --set wins, otherwise draw from the
// resolved rule at the given seed.
void make_sample(const Options& opt, SampleHandle& handle, double* p_used,
                 int32_t* clamped) {
  *p_used = -1.0;
  *clamped = 0;
  if (!opt.set.empty()) {
    const std::vector<std::int64_t> members = parse_int_list(opt.set);
    check(rb_sample_from_members(opt.n, members.data(), members.size(),
                                 &handle.ptr));
    return;
  }
  const rb_rule rule = make_rule(opt);
  check(rb_probability_for(&rule, opt.n, p_used, clamped));
  check(rb_sample_create(opt.n, *p_used, opt.seed, &handle.ptr));
}

void write_output(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw CliError{RB_ERR_INVALID_ARGUMENT, "cannot open " + opt.out};
  file << text;
}

void meta_line(std::string& out, const std::string& key,
               const std::string& value) {
  out += "# ";
  out += key;
  out += '=';
  out += value;
  out += '\n';
}

void config_meta(const Options& opt, const std::string& command,
                 std::string& out) {
  meta_line(out, "command", command);
  meta_line(out, "n", num(opt.n));
  meta_line(out, "k", num(static_cast<std::int64_t>(opt.k)));
  meta_line(out, "alpha", num(opt.alpha));
  meta_line(out, "eta", num(opt.eta));
  meta_line(out, "eps", num(opt.eps));
  meta_line(out, "xi", num(opt.xi));
  meta_line(out, "lambda", num(opt.lambda));
  meta_line(out, "a_const", num(opt.a_const));
  meta_line(out, "seed", num(static_cast<std::uint64_t>(opt.seed)));
}

void config_json(const Options& opt, JsonWriter& w) {
  w.key("config");
  w.begin_object();
  w.kv("n", opt.n);
  w.kv("k", opt.k);
  w.kv("alpha", opt.alpha);
  w.kv("eta", opt.eta);
  w.kv("eps", opt.eps);
  w.kv("xi", opt.xi);
  w.kv("lambda", opt.lambda);
  w.kv("a_const", opt.a_const);
  w.kv("seed", static_cast<std::uint64_t>(opt.seed));
  w.end_object();
}

// ---- subcommands ---------------------------------------------------------

int cmd_sample(const Options& opt) {
  SampleHandle sample;
  double p = -1.0;
  int32_t clamped = 0;
  make_sample(opt, sample, &p, &clamped);
  const size_t count = rb_sample_size(sample.ptr);
  std::vector<std::int64_t> members(count);
  if (count) rb_sample_members(sample.ptr, members.data(), count);

  std::string out;
  if (opt.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "sample");
    config_json(opt, w);
    w.kv("rule", effective_rule_name(opt));
    w.kv("p", p);
    w.kv("p_clamped", clamped != 0);
    w.kv("size", static_cast<std::uint64_t>(count));
    w.key("members");
    w.begin_array();
    for (std::int64_t m : members) w.value(m);
    w.end_array();
    w.end_object();
    out = w.str() + "\n";
  } else {
    config_meta(opt, "sample", out);
    meta_line(out, "rule", effective_rule_name(opt));
    meta_line(out, "p", num(p));
    meta_line(out, "p_clamped", clamped ? "1" : "0");
    meta_line(out, "size", num(static_cast<std::uint64_t>(count)));
    out += "member\n";
    for (std::int64_t m : members) {
      out += num(m);
      out += '\n';
    }
  }
  write_output(opt, out);
  return 0;
}

int cmd_count(const Options& opt) {
  SampleHandle sample;
  double p = -1.0;
  int32_t clamped = 0;
  make_sample(opt, sample, &p, &clamped);

  rb_profile* profile = nullptr;
  check(rb_count_all(sample.ptr, opt.k, make_mode(opt), &profile));
  const std::int64_t span = rb_profile_span(profile);

  std::string out;
  if (opt.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "count");
    config_json(opt, w);
    w.kv("mode", opt.mode);
    w.kv("p", p);
    w.key("counts");
    w.begin_array();
    for (std::int64_t j = 0; j <= span; ++j)
      w.value(rb_profile_at(profile, j));
    w.end_array();
    w.end_object();
    out = w.str() + "\n";
  } else {
    config_meta(opt, "count", out);
    meta_line(out, "mode", opt.mode);
    meta_line(out, "p", num(p));
    out += "j,count\n";
    for (std::int64_t j = 0; j <= span; ++j) {
      out += num(j);
      out += ',';
      out += num(rb_profile_at(profile, j));
      out += '\n';
    }
  }
  rb_profile_free(profile);
  write_output(opt, out);
  return 0;
}

int cmd_pack(const Options& opt) {
  SampleHandle sample;
  double p = -1.0;
  int32_t clamped = 0;
  make_sample(opt, sample, &p, &clamped);

  std::vector<std::int64_t> targets;
  if (opt.j >= 0) {
    targets.push_back(opt.j);
  } else {
    rb_profile* profile = nullptr;
    check(rb_count_all(sample.ptr, opt.k, RB_COUNT_DISTINCT, &profile));
    for (std::int64_t j = 0; j <= rb_profile_span(profile); ++j)
      if (rb_profile_at(profile, j) > 0) targets.push_back(j);
    rb_profile_free(profile);
  }

  struct Row {
    std::int64_t j;
    std::uint64_t y, y_star, w;
    const char* method;
  };
  std::vector<Row> rows;
  for (std::int64_t j : targets) {
    rb_reps* reps = nullptr;
    check(rb_enumerate_reps(sample.ptr, opt.k, j, 0, &reps));
    rb_packing* packing = nullptr;
    rb_status status = rb_pack_exact(reps, 0, &packing);
    if (status == RB_ERR_CAP_EXCEEDED) status = rb_pack_greedy(reps, &packing);
    if (status != RB_OK) {
      rb_reps_free(reps);
      raise(status);
    }
    rows.push_back({j, rb_reps_size(reps), rb_packing_y_star(packing),
                    rb_packing_w(packing),
                    rb_packing_method(packing) == RB_PACK_EXACT ? "exact"
                                                                : "greedy"});
    rb_packing_free(packing);
    rb_reps_free(reps);
  }

  std::string out;
  if (opt.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "pack");
    config_json(opt, w);
    w.key("per_j");
    w.begin_array();
    for (const Row& row : rows) {
      w.begin_object();
      w.kv("j", row.j);
      w.kv("y", row.y);
      w.kv("y_star", row.y_star);
      w.kv("w", row.w);
      w.kv("method", row.method);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    out = w.str() + "\n";
  } else {
    config_meta(opt, "pack", out);
    out += "j,y,y_star,w,method\n";
    for (const Row& row : rows) {
      out += num(row.j); out += ',';
      out += num(row.y); out += ',';
      out += num(row.y_star); out += ',';
      out += num(row.w); out += ',';
      out += row.method; out += '\n';
    }
  }
  write_output(opt, out);
  return 0;
}

int cmd_bounds(const Options& opt) {
  std::vector<std::pair<std::string, std::string>> rows;
  auto add = [&](const std::string& key, const std::string& value) {
    rows.emplace_back(key, value);
  };

  int64_t lo = 0, hi = 0;
  check(rb_window(opt.n, opt.k, opt.alpha, &lo, &hi));
  add("window_lo", num(lo));
  add("window_hi", num(hi));

  // Rule probability at this n, and the exact expectation anchor.
  rb_rule rule = make_rule(opt);
  double p = 0.0;
  int32_t clamped = 0;
  check(rb_probability_for(&rule, opt.n, &p, &clamped));
  add("p", num(p));
  add("p_clamped", clamped ? "1" : "0");

  const std::int64_t mid = static_cast<std::int64_t>(opt.k) * opt.n / 2;
  uint64_t rho_mid = 0;
  double e_y = -1.0;
  if (rb_rho_max(opt.n, opt.k, mid, 0, &rho_mid) == RB_OK) {
    check(rb_expected_count(rho_mid, p, opt.k, &e_y));
    add("rho_mid", num(rho_mid));
    add("e_y", num(e_y));
  }

  double floor_cj = 0.0;
  check(rb_rho_lower_bound(opt.n, opt.k, opt.alpha, &floor_cj));
  add("rho_lower_bound", num(floor_cj));

  const double c_j =
      opt.c_j >= 0.0
          ? opt.c_j
          : floor_cj / std::pow(static_cast<double>(opt.n), opt.k - 1);
  rb_constants_out constants;
  check(rb_constants(opt.alpha, opt.k, opt.eps, opt.xi, c_j, &constants));
  add("c_j", num(c_j));
  add("K", num(constants.k_const));
  add("C_k", num(constants.c_k));
  add("gamma_j", num(constants.gamma_j));
  add("med_gap_coeff", num(constants.med_gap_coeff));

  rb_chernoff chernoff;
  const rb_status chernoff_status = rb_chernoff_solve(
      opt.alpha, opt.eta, opt.target_lambda, opt.target_gamma, &chernoff);
  bool have_chernoff = chernoff_status == RB_OK;
  if (chernoff_status == RB_ERR_NO_LOWER_ROOT &&
      opt.eta * opt.alpha > 0.0) {
    // Fall back to the attainable range, as the proof-derived band does.
    check(rb_chernoff_solve(opt.alpha, opt.eta, opt.target_lambda,
                            opt.eta * opt.alpha / 4.0, &chernoff));
    have_chernoff = true;
    add("gamma_clamped", "1");
  } else if (!have_chernoff && chernoff_status != RB_ERR_NO_LOWER_ROOT) {
    raise(chernoff_status);
  }
  double f_at = 0.0, g_at = 0.0;
  if (have_chernoff) {
    add("delta0", num(chernoff.delta0));
    add("eps0", num(chernoff.eps0));
    check(rb_chernoff_f(opt.alpha, opt.eta, chernoff.delta0, &f_at));
    check(rb_chernoff_g(opt.alpha, opt.eta, chernoff.eps0, &g_at));
    add("f_at_delta0", num(f_at));
    add("g_at_eps0", num(g_at));
  } else {
    add("delta0", "nan");
    add("eps0", "nan");
  }

  const double ln = std::log(static_cast<double>(opt.n));
  const double t = opt.t_param > 0.0 ? opt.t_param : std::sqrt(5.0 * ln);
  const double med =
      opt.med > 0.0 ? opt.med : (e_y > 0.0 ? e_y : constants.k_const * c_j * ln);
  if (med > 0.0) {
    rb_talagrand tail;
    check(rb_talagrand_tail(med, t, opt.k, &tail));
    add("talagrand_t", num(t));
    add("talagrand_med", num(med));
    add("lower_threshold", num(tail.lower_threshold));
    add("lower_bound", num(tail.lower_bound));
    add("m_upper", num(tail.m_upper));
    add("delta_j", num(tail.m_upper / ln));
  }
  add("tail_prob", num(2.0 * std::pow(static_cast<double>(opt.n),
                                      -1.0 - opt.xi)));

  double av = 0.0;
  check(rb_av_limit_prob(opt.a_const, opt.alpha, opt.k, &av));
  add("av_limit_prob", num(av));
  double overlap_est = 0.0;
  check(rb_expected_overlap_estimate(opt.n, opt.k, &overlap_est));
  add("overlap_order_estimate", num(overlap_est));

  std::string out;
  if (opt.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "bounds");
    config_json(opt, w);
    for (const auto& [key, value] : rows) {
      w.key(key);
      if (value == "nan") w.null();
      else w.raw(value);
    }
    w.end_object();
    out = w.str() + "\n";
  } else {
    config_meta(opt, "bounds", out);
    out += "key,value\n";
    for (const auto& [key, value] : rows) {
      out += key;
      out += ',';
      out += value;
      out += '\n';
    }
  }
  write_output(opt, out);
  return 0;
}

int cmd_trials(const Options& opt) {
  rb_trial_config config;
  rb_trial_config_init(&config, opt.n);
  config.params = make_params(opt);
  config.rule = make_rule(opt);
  config.band = make_band(opt);
  config.trials = opt.trials;
  config.master_seed = opt.seed;
  // auto: full window for k=2 (fast pair path) and k>=3 up to n=1e4; beyond
  // that, endpoints + midpoint + 32 sampled window points.
  std::string strategy = opt.j_strategy;
  int sampled_js = opt.sampled_js;
  if (strategy == "auto") {
    if (opt.k == 2 || opt.n <= 10000) {
      strategy = "all";
    } else {
      strategy = "sampled";
      sampled_js = std::max(sampled_js, 32);
    }
  }
  if (strategy == "all") config.j_strategy = RB_JS_ALL;
  else if (strategy == "sampled") config.j_strategy = RB_JS_SAMPLED;
  else throw CLI::ValidationError("--j-strategy", "unknown: " + opt.j_strategy);
  config.sampled_js = sampled_js;
  config.with_packing = opt.packing ? 1 : 0;
  config.threads = resolve_threads(opt);

  rb_trial_report* report = nullptr;
  check(rb_run_trials(&config, &report));

  rb_resolved_band band;
  rb_trial_report_band(report, &band);
  int64_t lo = 0, hi = 0;
  rb_trial_report_window(report, &lo, &hi);
  const size_t num_js = rb_trial_report_num_js(report);

  std::string out;
  if (opt.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "trials");
    config_json(opt, w);
    w.key("run");
    w.begin_object();
    w.kv("rule", effective_rule_name(opt));
    w.kv("band", opt.band);
    w.kv("c_lo", opt.c_lo);
    w.kv("c_hi", opt.c_hi);
    w.kv("target_gamma", opt.target_gamma);
    w.kv("target_lambda", opt.target_lambda);
    w.kv("trials", opt.trials);
    w.kv("j_strategy", strategy);
    w.kv("sampled_js", sampled_js);
    w.kv("packing", opt.packing);
    w.end_object();
    w.key("resolved");
    w.begin_object();
    w.kv("p", rb_trial_report_p(report));
    w.kv("p_clamped", rb_trial_report_p_clamped(report) != 0);
    w.kv("window_lo", lo);
    w.kv("window_hi", hi);
    w.kv("band_lo", band.lo);
    w.kv("band_hi", band.hi);
    w.kv("band_delta0", band.delta0);
    w.kv("band_eps0", band.eps0);
    w.kv("band_gamma_effective", band.gamma_effective);
    w.kv("band_gamma_clamped", band.gamma_clamped != 0);
    w.kv("band_e_min", band.e_min);
    w.kv("band_e_max", band.e_max);
    w.end_object();
    w.key("aggregates");
    w.begin_object();
    w.kv("x_zero_fraction", rb_trial_report_x_zero(report));
    w.kv("coverage_fraction", rb_trial_report_coverage(report));
    w.kv("sandwich_violations", rb_trial_report_sandwich_violations(report));
    w.end_object();
    w.key("per_j");
    w.begin_array();
    for (size_t i = 0; i < num_js; ++i) {
      rb_j_stats stats;
      check(rb_trial_report_j_stats(report, i, &stats));
      w.begin_object();
      w.kv("j", stats.j);
      w.kv("rho", stats.rho);
      w.kv("mean_y", stats.mean_y);
      w.kv("var_y", stats.var_y);
      w.kv("median_y", stats.median_y);
      w.kv("mean_ystar", stats.mean_ystar);
      w.kv("mean_w", stats.mean_w);
      w.kv("in_band_fraction", stats.in_band_fraction);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    out = w.str() + "\n";
  } else {
    config_meta(opt, "trials", out);
    meta_line(out, "rule", effective_rule_name(opt));
    meta_line(out, "p", num(rb_trial_report_p(report)));
    meta_line(out, "p_clamped", rb_trial_report_p_clamped(report) ? "1" : "0");
    meta_line(out, "window_lo", num(lo));
    meta_line(out, "window_hi", num(hi));
    meta_line(out, "band", opt.band);
    meta_line(out, "band_lo", num(band.lo));
    meta_line(out, "band_hi", num(band.hi));
    meta_line(out, "band_gamma_effective", num(band.gamma_effective));
    meta_line(out, "band_gamma_clamped", band.gamma_clamped ? "1" : "0");
    meta_line(out, "trials", num(opt.trials));
    meta_line(out, "j_strategy", strategy);
    meta_line(out, "sampled_js", num(static_cast<std::int64_t>(sampled_js)));
    meta_line(out, "packing", opt.packing ? "1" : "0");
    meta_line(out, "x_zero_fraction", num(rb_trial_report_x_zero(report)));
    meta_line(out, "coverage_fraction", num(rb_trial_report_coverage(report)));
    meta_line(out, "sandwich_violations",
              num(rb_trial_report_sandwich_violations(report)));
    out += "j,mean_y,var_y,median_y,mean_ystar,mean_w,in_band_fraction\n";
    for (size_t i = 0; i < num_js; ++i) {
      rb_j_stats stats;
      check(rb_trial_report_j_stats(report, i, &stats));
      out += num(stats.j); out += ',';
      out += num(stats.mean_y); out += ',';
      out += num(stats.var_y); out += ',';
      out += num(stats.median_y); out += ',';
      out += num(stats.mean_ystar); out += ',';
      out += num(stats.mean_w); out += ',';
      out += num(stats.in_band_fraction); out += '\n';
    }
  }
  std::cerr << "trials finished in "
            << num(rb_trial_report_elapsed_seconds(report)) << "s\n";
  rb_trial_report_free(report);
  write_output(opt, out);
  return 0;
}

int scan_to_output(const Options& opt, rb_scan_report* report,
                   const std::string& command, const char* axis_name,
                   const char* analytic_name, bool with_slopes) {
  const size_t count = rb_scan_report_size(report);
  std::string out;
  if (opt.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.kv("command", command);
    config_json(opt, w);
    w.kv("trials", opt.trials);
    if (with_slopes) {
      w.kv("slope_raw", rb_scan_report_slope_raw(report));
      w.kv("slope_adjusted", rb_scan_report_slope_adjusted(report));
    }
    w.key("points");
    w.begin_array();
    for (size_t i = 0; i < count; ++i) {
      rb_scan_point point;
      check(rb_scan_report_point(report, i, &point));
      w.begin_object();
      w.kv(axis_name, point.axis);
      w.kv("estimate", point.estimate);
      w.kv("std_error", point.std_error);
      w.kv("trials", point.trials);
      w.kv(analytic_name, point.analytic);
      w.kv("skipped", point.skipped != 0);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    out = w.str() + "\n";
  } else {
    config_meta(opt, command, out);
    meta_line(out, "trials", num(opt.trials));
    if (with_slopes) {
      meta_line(out, "slope_raw", num(rb_scan_report_slope_raw(report)));
      meta_line(out, "slope_adjusted",
                num(rb_scan_report_slope_adjusted(report)));
    }
    out += axis_name;
    out += ",estimate,std_error,trials,";
    out += analytic_name;
    out += ",skipped\n";
    for (size_t i = 0; i < count; ++i) {
      rb_scan_point point;
      check(rb_scan_report_point(report, i, &point));
      out += num(point.axis); out += ',';
      out += num(point.estimate); out += ',';
      out += num(point.std_error); out += ',';
      out += num(point.trials); out += ',';
      out += num(point.analytic); out += ',';
      out += point.skipped ? "1" : "0";
      out += '\n';
    }
  }
  std::cerr << command << " finished in "
            << num(rb_scan_report_elapsed_seconds(report)) << "s\n";
  rb_scan_report_free(report);
  write_output(opt, out);
  return 0;
}

int cmd_scan_threshold(const Options& opt) {
  const std::vector<double> grid = parse_double_list(opt.a_grid);
  rb_scan_report* report = nullptr;
  check(rb_threshold_scan(opt.alpha, opt.k, opt.n, grid.data(), grid.size(),
                          opt.trials, opt.seed, resolve_threads(opt),
                          &report));
  return scan_to_output(opt, report, "scan-threshold", "a_const",
                        "av_limit_prob", false);
}

int cmd_scan_decay(const Options& opt) {
  const std::vector<std::int64_t> grid = parse_int_list(opt.n_grid);
  rb_scan_report* report = nullptr;
  check(rb_decay_scan(opt.k, opt.alpha, opt.eps, grid.data(), grid.size(),
                      opt.trials, opt.seed, resolve_threads(opt), &report));
  return scan_to_output(opt, report, "scan-decay", "n", "order_estimate",
                        true);
}

int cmd_check_median(const Options& opt) {
  const rb_params params = make_params(opt);
  const rb_rule rule = make_rule(opt);
  const std::int64_t j =
      opt.j >= 0 ? opt.j : static_cast<std::int64_t>(opt.k) * opt.n / 2;
  rb_median_check checkres;
  check(rb_concentration_check(&params, &rule, opt.trials, opt.seed, j,
                               resolve_threads(opt), &checkres));

  std::string out;
  if (opt.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "check-median");
    config_json(opt, w);
    w.kv("rule", effective_rule_name(opt));
    w.kv("j", checkres.j);
    w.kv("trials", checkres.trials);
    w.kv("emp_mean", checkres.emp_mean);
    w.kv("emp_median", checkres.emp_median);
    w.kv("gap", checkres.gap);
    w.kv("bound", checkres.bound);
    w.kv("pass", checkres.pass != 0);
    w.end_object();
    out = w.str() + "\n";
  } else {
    config_meta(opt, "check-median", out);
    meta_line(out, "rule", effective_rule_name(opt));
    out += "j,trials,emp_mean,emp_median,gap,bound,pass\n";
    out += num(checkres.j); out += ',';
    out += num(checkres.trials); out += ',';
    out += num(checkres.emp_mean); out += ',';
    out += num(checkres.emp_median); out += ',';
    out += num(checkres.gap); out += ',';
    out += num(checkres.bound); out += ',';
    out += checkres.pass ? "1" : "0";
    out += '\n';
  }
  write_output(opt, out);
  return 0;
}

int cmd_oracle(const Options& opt) {
  std::uint64_t comparisons = 0;
  std::uint64_t mismatches = 0;
  for (std::int64_t i = 0; i < opt.instances; ++i) {
    const std::uint64_t h =
        rb_derive_seed(opt.seed, RB_STREAM_INSTANCE, static_cast<std::uint64_t>(i));
    const std::int64_t n =
        2 + static_cast<std::int64_t>(h % static_cast<std::uint64_t>(
                                              std::max<std::int64_t>(opt.max_n - 1, 1)));
    const int k = 2 + static_cast<int>((h >> 8) % 3);
    const double p = 0.2 + 0.3 * static_cast<double>((h >> 16) % 3);
    rb_sample* sample = nullptr;
    check(rb_sample_create(
        n, p, rb_derive_seed(opt.seed, RB_STREAM_TRIAL, static_cast<std::uint64_t>(i)),
        &sample));
    for (int32_t mode : {RB_COUNT_DISTINCT, RB_COUNT_MULTISET}) {
      rb_profile* profile = nullptr;
      check(rb_count_all(sample, k, mode, &profile));
      for (std::int64_t j = 0; j <= static_cast<std::int64_t>(k) * n; ++j) {
        std::uint64_t brute = 0;
        check(rb_count_brute(sample, k, j, mode, 0, &brute));
        ++comparisons;
        if (brute != rb_profile_at(profile, j)) ++mismatches;
      }
      rb_profile_free(profile);
    }
    rb_sample_free(sample);
  }

  std::string out;
  if (opt.format == "json") {
    JsonWriter w;
    w.begin_object();
    w.kv("command", "oracle");
    config_json(opt, w);
    w.kv("instances", opt.instances);
    w.kv("comparisons", comparisons);
    w.kv("mismatches", mismatches);
    w.kv("pass", mismatches == 0);
    w.end_object();
    out = w.str() + "\n";
  } else {
    config_meta(opt, "oracle", out);
    out += "instances,comparisons,mismatches,pass\n";
    out += num(opt.instances); out += ',';
    out += num(comparisons); out += ',';
    out += num(mismatches); out += ',';
    out += mismatches == 0 ? "1" : "0";
    out += '\n';
  }
  write_output(opt, out);
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;

  // The config file provides defaults; flags override.
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
    if (!path.empty()) {
      try {
        load_config(path, opt);
      } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      break;
    }
  }

  CLI::App app{"random truncated representative additive k-bases"};
  app.require_subcommand(1);
  std::string config_path;  // consumed above; registered so parsing accepts it

  auto add_common = [&](CLI::App* cmd, bool with_rule, bool with_band,
                        bool with_run) {
    cmd->add_option("--config", config_path, "JSON config file (flags override)");
    cmd->add_option("--n", opt.n, "ground set bound; members live in [0, n]");
    cmd->add_option("--k", opt.k, "summand count (>= 2)");
    cmd->add_option("--alpha", opt.alpha, "window shape in (0, 1)");
    cmd->add_option("--eta", opt.eta, "k=2 rate slack");
    cmd->add_option("--eps", opt.eps, "k>=3 rate slack / logpower exponent");
    cmd->add_option("--xi", opt.xi, "Talagrand exponent slack");
    cmd->add_option("--lambda", opt.lambda, "upper tail exponent target");
    cmd->add_option("--a-const", opt.a_const, "threshold constant A");
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--out", opt.out, "output file (default stdout)");
    cmd->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    if (with_rule) {
      cmd->add_option("--rule", opt.rule,
                      "thm21|thm31|av2|avk|logpower|raw (default by k)");
      cmd->add_option("--p", opt.p, "raw inclusion probability");
      cmd->add_option("--K", opt.coeff, "logpower coefficient");
    }
    if (with_band) {
      cmd->add_option("--band", opt.band, "proof or fixed");
      cmd->add_option("--c-lo", opt.c_lo, "fixed band lower multiplier");
      cmd->add_option("--c-hi", opt.c_hi, "fixed band upper multiplier");
      cmd->add_option("--target-gamma", opt.target_gamma,
                      "proof band lower exponent target");
      cmd->add_option("--target-lambda", opt.target_lambda,
                      "proof band upper exponent target");
    }
    if (with_run) {
      cmd->add_option("--trials", opt.trials, "Monte Carlo trials");
      cmd->add_option("--j-strategy", opt.j_strategy, "auto, all, or sampled");
      cmd->add_option("--sampled-js", opt.sampled_js,
                      "extra random window points to report");
      cmd->add_flag("--packing", opt.packing, "also compute Y* and W");
      cmd->add_option("--threads", opt.threads,
                      "worker threads (auto = hardware)");
    }
  };

  CLI::App* sample = app.add_subcommand("sample", "draw a seeded subset");
  add_common(sample, true, false, false);

  CLI::App* count = app.add_subcommand("count", "representation profile");
  add_common(count, true, false, false);
  count->add_option("--set", opt.set, "explicit comma-separated members");
  count->add_option("--mode", opt.mode, "distinct or multiset");

  CLI::App* pack = app.add_subcommand("pack", "Y*, W per target");
  add_common(pack, true, false, false);
  pack->add_option("--set", opt.set, "explicit comma-separated members");
  pack->add_option("--j", opt.j, "single target (default: all with Y > 0)");

  CLI::App* bounds = app.add_subcommand("bounds", "analytic constants and tails");
  add_common(bounds, true, false, false);
  bounds->add_option("--target-gamma", opt.target_gamma, "lower exponent target");
  bounds->add_option("--target-lambda", opt.target_lambda, "upper exponent target");
  bounds->add_option("--c-j", opt.c_j, "capacity constant C(j)");
  bounds->add_option("--med", opt.med, "median for the Talagrand block");
  bounds->add_option("--t", opt.t_param, "Talagrand t");

  CLI::App* trials = app.add_subcommand("trials", "seeded Monte Carlo run");
  add_common(trials, true, true, true);

  CLI::App* scan_threshold =
      app.add_subcommand("scan-threshold", "coverage along an A grid");
  add_common(scan_threshold, false, false, true);
  scan_threshold->add_option("--a-grid", opt.a_grid, "comma-separated A values");

  CLI::App* scan_decay =
      app.add_subcommand("scan-decay", "mean overlap W along an n grid");
  add_common(scan_decay, false, false, true);
  scan_decay->add_option("--n-grid", opt.n_grid, "comma-separated n values");

  CLI::App* check_median =
      app.add_subcommand("check-median", "median-mean gap of Y*");
  add_common(check_median, true, false, true);
  check_median->add_option("--j", opt.j, "target (default floor(k n / 2))");

  CLI::App* oracle =
      app.add_subcommand("oracle", "brute-force equivalence suite");
  add_common(oracle, false, false, false);
  oracle->add_option("--instances", opt.instances, "random instances");
  oracle->add_option("--max-n", opt.max_n, "largest ground-set bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(opt);
    if (count->parsed()) return cmd_count(opt);
    if (pack->parsed()) return cmd_pack(opt);
    if (bounds->parsed()) return cmd_bounds(opt);
    if (trials->parsed()) return cmd_trials(opt);
    if (scan_threshold->parsed()) return cmd_scan_threshold(opt);
    if (scan_decay->parsed()) return cmd_scan_decay(opt);
    if (check_median->parsed()) return cmd_check_median(opt);
    if (oracle->parsed()) return cmd_oracle(opt);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const CliError& e) {
    std::cerr << "error: " << rb_status_name(e.status) << ": " << e.message
              << "\n";
    return is_validation_error(e.status) ? 2 : 1;
  }
  return 0;
}
