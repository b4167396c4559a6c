#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psq/buchstab.hpp"
#include "psq/common.hpp"
#include "psq/constants.hpp"
#include "psq/decomp.hpp"
#include "psq/report.hpp"
#include "psq/reps.hpp"
#include "psq/singular.hpp"
#include "psq/verify.hpp"
#include "psq/version.hpp"

namespace psq::cli {
namespace {

using report::CsvWriter;
using report::Format;
using report::JsonWriter;
using u64 = std::uint64_t;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void emit(const std::string& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << doc;
  if (!f) throw std::runtime_error("failed writing output file: " + path);
}

void json_head(JsonWriter& w, const char* sub) {
  w.field("tool", "psq");
  w.field("version", version_string);
  w.field("schema", schema_version);
  w.field("subcommand", sub);
}

void csv_head(CsvWriter& w, const char* sub) {
  w.comment("tool", std::string("psq"));
  w.comment("version", std::string(version_string));
  w.comment("schema", schema_version);
  w.comment("subcommand", std::string(sub));
}

Format checked_format(const std::string& name, bool allow_csv) {
  const Format f = report::parse_format(name);
  if (f == Format::csv && !allow_csv)
    throw std::invalid_argument(
        "csv output is only available for scan and buchstab");
  return f;
}

// ---- scan -------------------------------------------------------------------

struct ScanArgs {
  u64 x = 0, h = 0;
  std::string cls = "h2";
  std::string mode = "unrestricted";
  double theta1 = 0.95, theta2 = 0.6, eps = 0.0, b = 1.0, p_override = 0.0;
  int workers = 0;
  std::string format = "json", output;
};

int do_scan(const ScanArgs& a, std::ostream& out) {
  Timer t;
  const Format fmt = checked_format(a.format, true);
  reps::ScanRequest req;
  req.x = a.x;
  req.h = a.h;
  req.cls = reps::parse_class(a.cls);
  req.mode = reps::parse_mode(a.mode);
  req.theta1 = a.theta1;
  req.theta2 = a.theta2;
  req.eps = a.eps;
  req.b_exp = a.b;
  req.p_override = a.p_override;
  req.workers = a.workers;
  const auto rep = reps::scan_exceptions(req);

  std::string doc;
  if (fmt == Format::json) {
    JsonWriter w;
    json_head(w, "scan");
    w.begin_object("params");
    w.field("x", req.x);
    w.field("h", req.h);
    w.field("class", reps::class_name(req.cls));
    w.field("mode", reps::mode_name(req.mode));
    w.field("theta1", req.theta1);
    w.field("theta2", req.theta2);
    w.field("eps", req.eps);
    w.field("b", req.b_exp);
    w.field("p_override", req.p_override);
    w.field("workers", a.workers);
    w.end();
    w.field("series_cutoff", rep.series_cutoff);
    w.field("scanned", rep.scanned);
    w.field("exceptions", rep.exceptions);
    w.field("median_ratio", rep.median_ratio);
    w.begin_array("exceptional");
    for (u64 n : rep.exceptional) w.push(n);
    w.end();
    w.begin_array("records");
    for (const auto& rec : rep.records) {
      w.begin_record();
      w.field("n", rec.n);
      w.field("count", static_cast<std::int64_t>(rec.count));
      w.field("predicted", rec.predicted);
      w.field("ratio", rec.ratio);
      w.end();
    }
    w.end();
    w.field("elapsed_ms", t.ms());
    doc = w.finish();
  } else {
    CsvWriter w;
    csv_head(w, "scan");
    w.comment("x", req.x);
    w.comment("h", req.h);
    w.comment("class", std::string(reps::class_name(req.cls)));
    w.comment("mode", std::string(reps::mode_name(req.mode)));
    w.comment("theta1", req.theta1);
    w.comment("theta2", req.theta2);
    w.comment("eps", req.eps);
    w.comment("b", req.b_exp);
    w.comment("p_override", req.p_override);
    w.comment("workers", a.workers);
    w.comment("series_cutoff", rep.series_cutoff);
    w.comment("scanned", rep.scanned);
    w.comment("exceptions", rep.exceptions);
    w.comment("median_ratio", rep.median_ratio);
    w.comment("elapsed_ms", t.ms());
    w.columns({"n", "count", "predicted", "ratio"});
    for (const auto& rec : rep.records)
      w.row({std::to_string(rec.n), std::to_string(rec.count),
             report::csv_cell(rec.predicted), report::csv_cell(rec.ratio)});
    doc = w.finish();
  }
  emit(doc, a.output, out);
  return 0;
}

// ---- singular ---------------------------------------------------------------

struct SingularArgs {
  int j = 2;
  u64 n = 0;
  double series_cutoff = 100.0, product_cutoff = 100.0;
  std::string format = "json", output;
};

int do_singular(const SingularArgs& a, std::ostream& out) {
  Timer t;
  checked_format(a.format, false);
  const auto series = singular::singular_series(a.j, a.n, a.series_cutoff);
  const auto product = singular::singular_product(a.j, a.n, a.product_cutoff);

  JsonWriter w;
  json_head(w, "singular");
  w.begin_object("params");
  w.field("j", a.j);
  w.field("n", a.n);
  w.field("series_cutoff", a.series_cutoff);
  w.field("product_cutoff", a.product_cutoff);
  w.end();
  w.field("series_value", series.value);
  w.field("product_value", product.value);
  w.field("difference", std::abs(series.value - product.value));
  w.field("elapsed_ms", t.ms());
  emit(w.finish(), a.output, out);
  return 0;
}

// ---- buchstab ---------------------------------------------------------------

struct BuchstabArgs {
  double t_max = 3.0, step = 1e-4;
  std::string format = "csv", output;
};

int do_buchstab(const BuchstabArgs& a, std::ostream& out) {
  Timer t;
  const Format fmt = checked_format(a.format, true);
  const auto tab = buchstab::build_table(a.t_max, a.step);

  std::string doc;
  if (fmt == Format::json) {
    JsonWriter w;
    json_head(w, "buchstab");
    w.begin_object("params");
    w.field("t_max", a.t_max);
    w.field("step", a.step);
    w.end();
    w.field("grid_t_max", tab.t_max);
    w.field("grid_step", tab.step);
    w.field("points", static_cast<std::int64_t>(tab.last_index()));
    w.field("limit", buchstab::w_limit);
    w.begin_array("rows");
    for (std::int64_t j = 1; j <= tab.last_index(); ++j) {
      w.begin_record();
      w.field("t", 1.0 + static_cast<double>(j) /
                            static_cast<double>(tab.n_per_unit));
      w.field("w", tab.w_at(j));
      w.end();
    }
    w.end();
    w.field("elapsed_ms", t.ms());
    doc = w.finish();
  } else {
    CsvWriter w;
    csv_head(w, "buchstab");
    w.comment("t_max", a.t_max);
    w.comment("step", a.step);
    w.comment("grid_t_max", tab.t_max);
    w.comment("grid_step", tab.step);
    w.comment("points", static_cast<std::int64_t>(tab.last_index()));
    w.comment("limit", buchstab::w_limit);
    w.comment("elapsed_ms", t.ms());
    w.columns({"t", "w"});
    for (std::int64_t j = 1; j <= tab.last_index(); ++j)
      w.row({report::csv_cell(1.0 + static_cast<double>(j) /
                                        static_cast<double>(tab.n_per_unit)),
             report::csv_cell(tab.w_at(j))});
    doc = w.finish();
  }
  emit(doc, a.output, out);
  return 0;
}

// ---- decomp -----------------------------------------------------------------

struct DecompArgs {
  u64 x = 0;
  double theta1 = 0.95, theta2 = 0.6, eps = 0.0, b = 1.0, p_override = 0.0;
  u64 m = 0;  // 0 = no single-element dump
  std::string format = "json", output;
};

int do_decomp(const DecompArgs& a, std::ostream& out) {
  Timer t;
  checked_format(a.format, false);
  const auto cfg =
      decomp::derive_config(a.x, a.theta1, a.theta2, a.eps, a.b, a.p_override);

  JsonWriter w;
  json_head(w, "decomp");
  w.begin_object("params");
  w.field("x", a.x);
  w.field("theta1", a.theta1);
  w.field("theta2", a.theta2);
  w.field("eps", a.eps);
  w.field("b", a.b);
  w.field("p_override", a.p_override);
  w.end();
  w.begin_object("derived");
  w.field("l", cfg.l);
  w.field("y", cfg.y);
  w.field("h", cfg.h);
  w.field("p", cfg.p);
  w.field("z0", cfg.z0);
  w.field("u", cfg.u);
  w.field("v", cfg.v);
  w.field("w", cfg.w);
  w.field("z1_split", cfg.z1_split);
  w.field("z1_bracket", cfg.z1_bracket);
  w.field("m1_first", cfg.m1_first);
  w.field("m1_last", cfg.m1_last);
  w.field("m2_first", cfg.m2_first);
  w.field("m2_last", cfg.m2_last);
  w.field("i2_empty", cfg.i2_empty);
  w.field("degenerate", cfg.degenerate);
  w.field("z0_trivial", cfg.z0_trivial);
  w.field("cap_safe", cfg.cap_safe);
  w.field("split_valid", cfg.split_valid);
  w.end();

  using decomp::WeightKind;
  constexpr WeightKind kinds[] = {
      WeightKind::lambda0,      WeightKind::gamma1,
      WeightKind::gamma2,       WeightKind::gamma3,
      WeightKind::gamma4,       WeightKind::gamma5,
      WeightKind::beta1,        WeightKind::beta2,
      WeightKind::beta3,        WeightKind::beta4,
      WeightKind::beta5,        WeightKind::beta6,
      WeightKind::lambda2_minus, WeightKind::lambda2_plus,
      WeightKind::lambda0_first, WeightKind::lambda0_second,
  };
  w.begin_array("weights");
  if (!cfg.i2_empty) {
    for (WeightKind k : kinds) {
      const auto table = decomp::build_weight_table(cfg, k);
      w.begin_record();
      w.field("kind", decomp::weight_kind_name(k));
      w.field("sum", table.sum());
      w.field("min", table.min_value());
      w.field("max", table.max_value());
      w.field("support", table.support_size());
      w.end();
    }
  }
  w.end();

  if (a.m != 0) {
    if (!cfg.in_i2(a.m))
      throw std::invalid_argument("m is outside the inner window");
    const auto g = decomp::gamma_decomposition(a.m, cfg);
    const auto b = decomp::beta_decomposition(a.m, cfg);
    const auto s = decomp::lambda0_split(a.m, cfg);
    w.begin_object("element");
    w.field("m", a.m);
    w.field("lambda0", static_cast<std::int64_t>(decomp::lambda0(a.m, cfg)));
    w.field("gamma1", g.g1);
    w.field("gamma2", g.g2);
    w.field("gamma3", g.g3);
    w.field("gamma4", g.g4);
    w.field("gamma5", g.g5);
    w.field("beta1", b.b1);
    w.field("beta2", b.b2);
    w.field("beta3", b.b3);
    w.field("beta4", b.b4);
    w.field("beta5", b.b5);
    w.field("beta6", b.b6);
    w.field("split_first", s.first);
    w.field("split_second", s.second);
    w.field("split_valid", s.valid);
    w.field("lambda2_minus", decomp::lambda2_minus(a.m, cfg));
    w.field("lambda2_plus", decomp::lambda2_plus(a.m, cfg));
    w.end();
  }
  w.field("elapsed_ms", t.ms());
  emit(w.finish(), a.output, out);
  return 0;
}

// ---- constants ----------------------------------------------------------------

struct ConstantsArgs {
  double theta2 = 0.6, eps = 0.0;
  std::string method = "grid";
  u64 resolution = 2000;
  u64 seed = 0;
  int workers = 0;
  std::string format = "json", output;
};

void constant_fields(JsonWriter& w, const constants::SieveConstant& c) {
  w.field("value", c.value);
  w.field("error", c.error);
  w.field("method", constants::method_name(c.method));
  w.field("resolution", c.resolution);
  w.field("seed", c.seed);
  w.field("one_dim", c.one_dim);
  w.field("multi_dim", c.multi_dim);
}

int do_constants(const ConstantsArgs& a, std::ostream& out) {
  Timer t;
  checked_format(a.format, false);
  const auto method = constants::parse_method(a.method);
  const auto lo = constants::sigma2_minus(a.theta2, a.eps, method,
                                          a.resolution, a.seed, a.workers);
  const auto hi = constants::sigma2_plus(a.theta2, a.eps, method, a.resolution,
                                         a.seed, a.workers);
  const auto comb =
      constants::combined_bound(a.theta2, method, a.resolution, a.seed,
                                a.workers);

  JsonWriter w;
  json_head(w, "constants");
  w.begin_object("params");
  w.field("theta2", a.theta2);
  w.field("eps", a.eps);
  w.field("method", a.method);
  w.field("resolution", a.resolution);
  w.field("seed", a.seed);
  w.field("workers", a.workers);
  w.end();
  w.begin_object("sigma2_minus");
  constant_fields(w, lo);
  w.end();
  w.begin_object("sigma2_plus");
  constant_fields(w, hi);
  w.end();
  w.begin_object("combined");
  w.field("value", comb.value);
  w.field("error", comb.error);
  w.field("sigma1_plus", constants::sigma1_plus_ref);
  w.field("sigma1_minus", constants::sigma1_minus_ref);
  w.end();
  w.field("elapsed_ms", t.ms());
  emit(w.finish(), a.output, out);
  return 0;
}

// ---- verify -------------------------------------------------------------------

struct VerifyArgs {
  int criterion = 0;  // 0 = all
  int workers = 0;
  std::string format = "text", output;
};

int do_verify(const VerifyArgs& a, std::ostream& out) {
  Timer t;
  if (a.format != "text" && a.format != "json")
    throw std::invalid_argument("verify supports formats text and json");

  std::vector<int> ids = verify::criterion_ids();
  if (a.criterion != 0) ids = {a.criterion};
  std::vector<verify::CriterionResult> results;
  bool all_passed = true;
  for (int id : ids) {
    results.push_back(verify::run_criterion(id, a.workers));
    all_passed = all_passed && results.back().passed;
  }

  std::string doc;
  if (a.format == "json") {
    JsonWriter w;
    json_head(w, "verify");
    w.begin_object("params");
    w.field("criterion", a.criterion);
    w.field("workers", a.workers);
    w.end();
    w.begin_array("criteria");
    for (const auto& r : results) {
      w.begin_record();
      w.field("id", r.id);
      w.field("name", r.name);
      w.field("passed", r.passed);
      w.field("detail", r.detail);
      w.end();
    }
    w.end();
    w.field("all_passed", all_passed);
    w.field("elapsed_ms", t.ms());
    doc = w.finish();
  } else {
    for (const auto& r : results) {
      char line[640];
      std::snprintf(line, sizeof(line), "criterion %2d: %s — %s — %s\n", r.id,
                    r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
      doc += line;
    }
    doc += all_passed ? "all passed: yes\n" : "all passed: no\n";
    doc += "elapsed_ms = " + format_double(t.ms()) + "\n";
  }
  emit(doc, a.output, out);
  return all_passed ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"prime plus prime-square representation toolkit"};
  app.set_version_flag("--version", std::string(version_string));
  app.require_subcommand(1);
  // --h is a real option (window length), so help is --help only
  app.set_help_flag("--help", "print help and exit");
  auto add_sub = [&app](const char* name, const char* desc) {
    auto* sc = app.add_subcommand(name, desc);
    sc->set_help_flag("--help", "print help and exit");
    return sc;
  };

  ScanArgs scan;
  auto* sc_scan = add_sub(
      "scan", "scan a window for class members without representations");
  sc_scan->add_option("--x", scan.x, "window start; the scan covers (X, X+H]")
      ->required();
  sc_scan->add_option("--h", scan.h, "window length")->required();
  sc_scan->add_option("--class", scan.cls, "target class: h2, h3 or h4")
      ->capture_default_str();
  sc_scan->add_option("--mode", scan.mode, "intervals or unrestricted")
      ->capture_default_str();
  sc_scan->add_option("--theta1", scan.theta1, "outer window exponent")
      ->capture_default_str();
  sc_scan->add_option("--theta2", scan.theta2, "inner window exponent")
      ->capture_default_str();
  sc_scan->add_option("--eps", scan.eps, "interval padding exponent")
      ->capture_default_str();
  sc_scan->add_option("--b", scan.b, "series cutoff exponent (P = log^B X)")
      ->capture_default_str();
  sc_scan->add_option("--p-override", scan.p_override,
                      "series cutoff override (0 = derive)")
      ->capture_default_str();
  sc_scan->add_option("--workers", scan.workers, "worker threads (0 = auto)");
  sc_scan->add_option("--format", scan.format, "json or csv")
      ->capture_default_str();
  sc_scan->add_option("--output", scan.output, "output file (default stdout)");

  SingularArgs singular_args;
  auto* sc_singular = add_sub(
      "singular", "evaluate the singular series for one target");
  sc_singular->add_option("--j", singular_args.j, "series index: 2 or 3")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  sc_singular->add_option("--n", singular_args.n, "target integer")
      ->required();
  sc_singular
      ->add_option("--series-cutoff", singular_args.series_cutoff,
                   "truncated-series modulus cutoff")
      ->capture_default_str();
  sc_singular
      ->add_option("--product-cutoff", singular_args.product_cutoff,
                   "euler-product prime cutoff")
      ->capture_default_str();
  sc_singular->add_option("--format", singular_args.format, "json")
      ->capture_default_str();
  sc_singular->add_option("--output", singular_args.output,
                          "output file (default stdout)");

  BuchstabArgs buch;
  auto* sc_buch = add_sub(
      "buchstab", "tabulate the delay-equation density function");
  sc_buch->add_option("--t-max", buch.t_max, "table end (2..20)")
      ->capture_default_str();
  sc_buch->add_option("--step", buch.step, "grid step (1e-6..1e-2)")
      ->capture_default_str();
  sc_buch->add_option("--format", buch.format, "csv or json")
      ->capture_default_str();
  sc_buch->add_option("--output", buch.output, "output file (default stdout)");

  DecompArgs dec;
  auto* sc_dec = add_sub(
      "decomp", "derive interval config and sieve weight summaries");
  sc_dec->add_option("--x", dec.x, "base scale X")->required();
  sc_dec->add_option("--theta1", dec.theta1, "outer window exponent")
      ->capture_default_str();
  sc_dec->add_option("--theta2", dec.theta2, "inner window exponent")
      ->capture_default_str();
  sc_dec->add_option("--eps", dec.eps, "interval padding exponent")
      ->capture_default_str();
  sc_dec->add_option("--b", dec.b, "series cutoff exponent")
      ->capture_default_str();
  sc_dec->add_option("--p-override", dec.p_override,
                     "series cutoff override (0 = derive)")
      ->capture_default_str();
  sc_dec->add_option("--m", dec.m,
                     "also dump every weight for this window element");
  sc_dec->add_option("--format", dec.format, "json")->capture_default_str();
  sc_dec->add_option("--output", dec.output, "output file (default stdout)");

  ConstantsArgs con;
  auto* sc_con = add_sub(
      "constants", "evaluate the sieve constants and the combined bound");
  sc_con->add_option("--theta2", con.theta2, "inner window exponent")
      ->capture_default_str();
  sc_con->add_option("--eps", con.eps, "recorded interval padding (not used "
                                       "in the integrals)")
      ->capture_default_str();
  sc_con->add_option("--method", con.method, "grid or monte_carlo")
      ->capture_default_str();
  sc_con
      ->add_option("--resolution", con.resolution,
                   "grid resolution per axis, or monte carlo sample count")
      ->capture_default_str();
  sc_con->add_option("--seed", con.seed, "monte carlo seed")
      ->capture_default_str();
  sc_con->add_option("--workers", con.workers, "worker threads (0 = auto)");
  sc_con->add_option("--format", con.format, "json")->capture_default_str();
  sc_con->add_option("--output", con.output, "output file (default stdout)");

  VerifyArgs ver;
  auto* sc_ver = add_sub(
      "verify", "run the acceptance checks and print a pass/fail table");
  sc_ver->add_option("--criterion", ver.criterion,
                     "criterion id 1..10 (0 = all)")
      ->capture_default_str();
  sc_ver->add_option("--workers", ver.workers, "worker threads (0 = auto)");
  sc_ver->add_option("--format", ver.format, "text or json")
      ->capture_default_str();
  sc_ver->add_option("--output", ver.output, "output file (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sc_scan->parsed()) return do_scan(scan, out);
    if (sc_singular->parsed()) return do_singular(singular_args, out);
    if (sc_buch->parsed()) return do_buchstab(buch, out);
    if (sc_dec->parsed()) return do_decomp(dec, out);
    if (sc_con->parsed()) return do_constants(con, out);
    if (sc_ver->parsed()) return do_verify(ver, out);
  } catch (const ConsistencyError& e) {
    err << "consistency error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace psq::cli
