#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "catq/cat_states.hpp"
#include "catq/entangled.hpp"
#include "catq/fixtures.hpp"
#include "catq/fock_scheme.hpp"
#include "catq/wigner.hpp"

namespace catq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands{"table1", "fidelity-map", "entangled", "fock-scheme",
                                         "wigner"};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt(double v, int precision = 10) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& provenance, const std::string& header)
      : out_(path) {
    if (!out_) throw InputError("cannot write " + path.string());
    out_ << provenance << '\n' << header << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

  std::ostream& stream() { return out_; }

 private:
  std::ofstream out_;
};

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
}

// Runs body(i) for i in [0, count) on all cores; results must be written by index.
void parallel_for(int count, const std::function<void(int)>& body) {
  const int threads =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(count, 1));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double tail_tol(const Options& opts) { return opts.tol.value_or(kDefaultTailTol); }

fs::path fixture_or_default(const Config& config, const std::string& fallback) {
  const auto given = config.text("fixture");
  return given.empty() ? fixture_dir() / fallback : fs::path(given);
}

std::vector<Parity> parities_from(const std::string& text) {
  if (text == "both") return {Parity::even, Parity::odd};
  try {
    return {parse_parity(text)};
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
}

Parity parity_from(const std::string& text) {
  try {
    return parse_parity(text);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError("config: " + what);
}

const char* pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

json command_defaults(const std::string& command) {
  if (command == "table1")
    return {{"n_min", 2}, {"n_max", 9},       {"parity", "both"},
            {"threshold", 0.99}, {"beta_tol", 1e-4}, {"fixture", ""}};
  if (command == "fidelity-map")
    return {{"n", 9},           {"parity", "even"},   {"quantity", "fidelity"},
            {"alpha_min", -2.0}, {"alpha_max", 2.0},  {"alpha_points", 81},
            {"beta_min", 0.05},  {"beta_max", 3.0},   {"beta_points", 60},
            {"k", 0}};
  if (command == "entangled")
    return {{"fixture", ""}, {"column", "all"}, {"n", 0},           {"parity", "even"},
            {"beta", 1.0},   {"alpha", 0.0},    {"alpha_prime", 1.0}, {"k", 0}};
  if (command == "fock-scheme")
    return {{"fixture", ""},   {"column", "all"},   {"check_oracle", true},
            {"n", 10},         {"parity", "even"},  {"beta", 2.0},
            {"m", 3},          {"photons", "4,2,2,2"}, {"restarts", 64},
            {"budget", 60000}, {"fit_floor", 0.97}};
  if (command == "wigner")
    return {{"fixture", ""}, {"column", "all"}, {"resolution", 256}, {"half_width", 0.0}};
  throw InputError("unknown command '" + command + "'");
}

Config make_config(const std::string& command, const json& file_values) {
  Config config;
  config.command = command;
  config.values = command_defaults(command);
  if (!file_values.is_null()) {
    if (!file_values.is_object()) throw InputError("config: top level must be a JSON object");
    for (const auto& [key, value] : file_values.items()) {
      if (!config.values.contains(key))
        throw InputError("config: unknown key '" + key + "' for " + command);
      const auto& def = config.values[key];
      bool ok = false;
      if (def.is_number_integer()) ok = value.is_number_integer();
      else if (def.is_number()) ok = value.is_number();
      else if (def.is_string()) ok = value.is_string();
      else if (def.is_boolean()) ok = value.is_boolean();
      if (!ok)
        throw InputError("config: key '" + key + "' expects " + std::string(def.type_name()) +
                         ", got " + std::string(value.type_name()));
      config.values[key] = def.is_number_float() ? json(value.get<double>()) : value;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(command + "\n" + config.values.dump())));
  config.hash = buf;
  return config;
}

Config load_config(const std::string& command, const std::optional<fs::path>& path) {
  if (!path) return make_config(command, json());
  std::ifstream in(*path);
  if (!in) throw InputError("cannot open config " + path->string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config " + path->string() + ": " + e.what());
  }
  return make_config(command, doc);
}

std::string provenance_line(const Config& config, std::uint64_t seed) {
  return "# provenance: catq " + config.command + " config_hash=" + config.hash +
         " seed=" + std::to_string(seed);
}

int cmd_table1(const Options& opts, const Config& config, std::ostream& log) {
  const int n_min = config.integer("n_min");
  const int n_max = config.integer("n_max");
  require(2 <= n_min && n_min <= n_max && n_max <= 12, "need 2 <= n_min <= n_max <= 12");
  const double threshold = config.real("threshold");
  require(threshold > 0.0 && threshold < 1.0, "threshold must lie in (0, 1)");
  const double beta_tol = config.real("beta_tol");
  require(beta_tol > 0.0, "beta_tol must be positive");
  const auto parities = parities_from(config.text("parity"));

  struct Job {
    int n;
    Parity parity;
  };
  std::vector<Job> jobs;
  for (int n = n_min; n <= n_max; ++n)
    for (auto p : parities) jobs.push_back({n, p});
  std::vector<Table1Row> rows(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int i) {
    rows[i] = table1_search(jobs[i].n, jobs[i].parity, threshold, beta_tol);
  });

  ensure_out_dir(opts.out);
  CsvFile csv(opts.out / "table1.csv", provenance_line(config, opts.seed),
              "n,parity,alpha,beta_max,F_at_crossing");
  for (const auto& r : rows)
    csv.row({std::to_string(r.n), std::string(to_string(r.parity)), fmt(r.alpha), fmt(r.beta_max),
             fmt(r.fidelity)});
  log << "wrote " << (opts.out / "table1.csv").string() << '\n';

  if (!opts.verify) return kOk;
  const auto reference = load_table1(fixture_or_default(config, "table1.csv"));
  constexpr double kTol = 0.01;
  bool all_ok = true;
  for (const auto& r : rows) {
    const auto it = std::find_if(reference.begin(), reference.end(), [&](const Table1Entry& e) {
      return e.n == r.n && e.parity == r.parity;
    });
    if (it == reference.end()) {
      log << "row n=" << r.n << ' ' << to_string(r.parity) << ": no reference, not checked\n";
      continue;
    }
    const double db = r.beta_max - it->beta;
    const double da = r.alpha - it->alpha;
    const bool ok = std::abs(db) <= kTol && std::abs(da) <= kTol;
    all_ok = all_ok && ok;
    log << pass_fail(ok) << " n=" << r.n << ' ' << to_string(r.parity) << ": beta "
        << fmt(r.beta_max, 6) << " vs " << it->beta << " (diff " << fmt(db, 3) << "), alpha "
        << fmt(r.alpha, 6) << " vs " << it->alpha << " (diff " << fmt(da, 3) << ")\n";
  }
  return all_ok ? kOk : kMismatch;
}

int cmd_fidelity_map(const Options& opts, const Config& config, std::ostream& log) {
  const int n = config.integer("n");
  require(n >= 1 && n <= 30, "n must lie in [1, 30]");
  const Parity parity = parity_from(config.text("parity"));
  const std::string quantity = config.text("quantity");
  const double a_min = config.real("alpha_min"), a_max = config.real("alpha_max");
  const double b_min = config.real("beta_min"), b_max = config.real("beta_max");
  const int a_pts = config.integer("alpha_points"), b_pts = config.integer("beta_points");
  const int k = config.integer("k");
  require(a_pts >= 2 && b_pts >= 2, "need at least two points per axis");
  require(a_min < a_max && b_min < b_max, "empty axis range");
  require(b_min > 0.0, "beta_min must be positive");
  require(k >= 0, "k must be >= 0");

  auto alpha_at = [&](int i) { return a_min + (a_max - a_min) * i / (a_pts - 1); };
  auto beta_at = [&](int j) { return b_min + (b_max - b_min) * j / (b_pts - 1); };

  ensure_out_dir(opts.out);
  const auto path = opts.out / ("fidelity_map_" + quantity + ".csv");
  const auto prov = provenance_line(config, opts.seed);

  if (quantity == "max_fidelity") {
    std::vector<AlphaOptimum> best(b_pts);
    parallel_for(b_pts, [&](int j) { best[j] = max_fidelity_over_alpha(n, parity, beta_at(j)); });
    CsvFile csv(path, prov, "beta,alpha_opt,F_max");
    for (int j = 0; j < b_pts; ++j)
      csv.row({fmt(beta_at(j)), fmt(best[j].alpha), fmt(best[j].fidelity)});
  } else if (quantity == "fidelity" || quantity == "scalar_product" ||
             quantity == "success_probability") {
    const int cells = a_pts * b_pts;
    std::vector<double> value(cells), extra(cells, 0.0);
    parallel_for(cells, [&](int c) {
      const double a = alpha_at(c / b_pts), b = beta_at(c % b_pts);
      if (quantity == "fidelity") {
        value[c] = fidelity_scq({parity, b, a, n});
      } else if (quantity == "scalar_product") {
        value[c] = std::abs(scalar_product_scq(n, a, b));
      } else {
        const auto opt = maximize_probability_over_alpha_prime({parity, b, a, n}, k);
        value[c] = opt.probability;
        extra[c] = opt.alpha_prime;
      }
    });
    const std::string header = quantity == "fidelity"         ? "alpha,beta,F"
                               : quantity == "scalar_product" ? "alpha,beta,abs_SP"
                                                              : "alpha,beta,alpha_prime_opt,P_max";
    CsvFile csv(path, prov, header);
    for (int c = 0; c < cells; ++c) {
      std::vector<std::string> cells_out{fmt(alpha_at(c / b_pts)), fmt(beta_at(c % b_pts))};
      if (quantity == "success_probability") cells_out.push_back(fmt(extra[c]));
      cells_out.push_back(fmt(value[c]));
      csv.row(cells_out);
    }
  } else {
    throw InputError("config: quantity must be fidelity, scalar_product, max_fidelity or "
                     "success_probability");
  }
  log << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_entangled(const Options& opts, const Config& config, std::ostream& log) {
  std::vector<EntangledColumn> columns;
  bool from_fixture = true;
  if (config.integer("n") > 0) {
    from_fixture = false;
    EntangledColumn c;
    c.name = "custom";
    c.spec = {parity_from(config.text("parity")), config.real("beta"), config.real("alpha"),
              config.integer("n")};
    c.alpha_prime = config.real("alpha_prime");
    c.k = config.integer("k");
    require(c.k >= 0, "k must be >= 0");
    try {
      c.spec.validate();
    } catch (const DomainError& e) {
      throw InputError(e.what());
    }
    columns.push_back(c);
  } else if (!config.text("fixture").empty()) {
    columns = load_entangled_table(config.text("fixture"));
  } else {
    for (const auto* f : {"table2.ini", "table3.ini"}) {
      auto part = load_entangled_table(fixture_dir() / f);
      columns.insert(columns.end(), part.begin(), part.end());
    }
  }
  const auto wanted = config.text("column");
  if (wanted != "all") {
    std::erase_if(columns, [&](const EntangledColumn& c) { return c.name != wanted; });
    if (columns.empty()) throw InputError("no column named '" + wanted + "'");
  }

  ensure_out_dir(opts.out);
  const auto prov = provenance_line(config, opts.seed);
  CsvFile summary(opts.out / "entangled_summary.csv", prov,
                  "column,n,parity,beta,alpha,alpha_prime,k,probability,probability_closed_form,"
                  "heralded_fidelity,reconstruction_fidelity");
  CsvFile splitters(opts.out / "entangled_splitters.csv", prov,
                    "column,index,z_re,z_im,t_re,t_im,r_re,r_im");

  constexpr double kSplitterTol = 0.005;
  constexpr double kProbabilityTol = 0.01;
  bool all_ok = true;
  for (const auto& c : columns) {
    const auto input = dm_coefficients(c.spec, c.k, c.alpha_prime);
    const auto decomp = bs_decomposition(input);
    const double p = success_probability_scq(c.spec, c.k, c.alpha_prime);
    const double p_closed = success_probability_closed_form(c.spec, c.k, c.alpha_prime);
    const auto herald = heralded_state(input, c.spec.alpha, c.alpha_prime, c.k,
                                       opts.cutoff.value_or(-1), tail_tol(opts));
    const auto target = scq_vector(c.spec, herald.state.cutoff(), tail_tol(opts));
    const double f_herald = fidelity(herald.state, target);
    const double f_round = input_fidelity(input, reconstruct_input(decomp));

    summary.row({c.name, std::to_string(c.spec.n), std::string(to_string(c.spec.parity)),
                 fmt(c.spec.beta), fmt(c.spec.alpha), fmt(c.alpha_prime), std::to_string(c.k),
                 fmt(p), fmt(p_closed), fmt(f_herald, 15), fmt(f_round, 15)});
    for (std::size_t i = 0; i < decomp.bs_list.size(); ++i) {
      const auto& bs = decomp.bs_list[i];
      splitters.row({c.name, std::to_string(i + 1), fmt(decomp.roots[i].real()),
                     fmt(decomp.roots[i].imag()), fmt(bs.t.real()), fmt(bs.t.imag()),
                     fmt(bs.r.real()), fmt(bs.r.imag())});
    }
    log << c.name << ": P = " << fmt(p, 4) << ", heralded fidelity 1 - " << fmt(1 - f_herald, 3)
        << ", round trip 1 - " << fmt(1 - f_round, 3) << '\n';

    if (!opts.verify) continue;
    const bool round_ok = f_round > 1.0 - 1e-10;
    bool ok = round_ok;
    if (from_fixture) {
      const auto match = match_splitters(c.splitters, decomp.bs_list);
      const bool split_ok =
          match.max_t_error <= kSplitterTol && match.max_r_error <= kSplitterTol;
      const bool p_ok = std::abs(p - c.probability) <= kProbabilityTol;
      ok = ok && split_ok && p_ok;
      log << pass_fail(ok) << ' ' << c.name << ": max |dt| " << fmt(match.max_t_error, 3)
          << ", max |dr| " << fmt(match.max_r_error, 3) << ", P " << fmt(p, 4) << " vs "
          << c.probability << '\n';
    } else {
      log << pass_fail(ok) << ' ' << c.name << ": round trip only\n";
    }
    all_ok = all_ok && ok;
  }
  return all_ok ? kOk : kMismatch;
}

namespace {

void write_config_fixture(const fs::path& path, const std::string& prov, const std::string& name,
                          Parity parity, double beta, const FitResult& fit) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  auto cplx_text = [](cplx z) {
    std::ostringstream os;
    const double turns = std::arg(z) / std::numbers::pi;
    os << std::setprecision(12) << std::abs(z) << (turns < 0 ? "exp(-i" : "exp(i")
       << std::abs(turns) << "pi)";
    return os.str();
  };
  auto list = [&](const auto& items, auto&& f) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + f(items[i]);
    return s;
  };
  out << prov << "\n\n[" << name << "]\n";
  out << "parity = " << to_string(parity) << "\nbeta = " << fmt(beta, 12) << '\n';
  out << "photons = " << list(fit.config.photons, [](int k) { return std::to_string(k); }) << '\n';
  out << "alpha = " << fmt(fit.config.final_alpha, 12) << '\n';
  out << "fidelity = " << fmt(fit.fidelity, 12) << "\nprobability = " << fmt(fit.probability, 12)
      << '\n';
  out << "alpha_j = " << list(fit.config.disp, cplx_text) << '\n';
  out << "t = " << list(fit.config.bs, [&](const BeamSplitter& b) { return cplx_text(b.t); })
      << '\n';
  out << "r = " << list(fit.config.bs, [&](const BeamSplitter& b) { return cplx_text(b.r); })
      << '\n';
  out << "displacement_convention = direct\n";
}

int run_fit(const Options& opts, const Config& config, std::ostream& log) {
  const int n = config.integer("n");
  const int m = config.integer("m");
  const Parity parity = parity_from(config.text("parity"));
  const double beta = config.real("beta");
  std::vector<int> photons;
  try {
    for (const auto& s : split_list(config.text("photons"))) photons.push_back(std::stoi(s));
  } catch (const std::exception&) {
    throw InputError("config: photons must be a comma-separated list of integers");
  }
  require(m >= 1 && static_cast<int>(photons.size()) == m + 1, "photons needs m + 1 entries");
  int total = 0;
  for (int k : photons) {
    require(k >= 0, "photon numbers must be >= 0");
    total += k;
  }
  require(total == n, "photon numbers must sum to n");
  require(beta > 0.0, "beta must be positive");
  require(config.integer("restarts") >= 1 && config.integer("budget") >= 100,
          "restarts >= 1 and budget >= 100 required");

  const auto opt_alpha = max_fidelity_over_alpha(n, parity, beta);
  const CatSpec target{parity, beta, opt_alpha.alpha, n};
  FitOptions fo;
  fo.restarts = config.integer("restarts");
  fo.seed = opts.seed;
  fo.budget = static_cast<std::size_t>(config.integer("budget"));
  const auto fit = fit_cascade(target, m, photons, fo);

  const auto prov = provenance_line(config, opts.seed);
  CsvFile params(opts.out / "fock_fit.csv", prov,
                 "j,photons,t_re,t_im,r_re,r_im,alpha_re,alpha_im");
  params.row({"0", std::to_string(photons[0]), "", "", "", "", "", ""});
  for (int j = 1; j <= m; ++j) {
    const auto& bs = fit.config.bs[j - 1];
    const auto& a = fit.config.disp[j - 1];
    params.row({std::to_string(j), std::to_string(photons[j]), fmt(bs.t.real()), fmt(bs.t.imag()),
                fmt(bs.r.real()), fmt(bs.r.imag()), fmt(a.real()), fmt(a.imag())});
  }
  CsvFile summary(opts.out / "fock_fit_summary.csv", prov,
                  "n,parity,beta,m,final_alpha,fidelity,probability,best_restart,restarts,"
                  "evaluations");
  summary.row({std::to_string(n), std::string(to_string(parity)), fmt(beta), std::to_string(m),
               fmt(fit.config.final_alpha), fmt(fit.fidelity), fmt(fit.probability),
               std::to_string(fit.best_restart), std::to_string(fo.restarts),
               std::to_string(fit.evaluations)});
  write_config_fixture(opts.out / "fock_fit.ini", prov, "fit", parity, beta, fit);
  log << "fit: F = " << fmt(fit.fidelity, 6) << ", P = " << fmt(fit.probability, 4)
      << " (restart " << fit.best_restart << " of " << fo.restarts << ")\n";

  if (!opts.verify) return kOk;
  const bool ok = fit.fidelity >= config.real("fit_floor");
  log << pass_fail(ok) << " fit: F " << fmt(fit.fidelity, 6) << " vs floor "
      << config.real("fit_floor") << '\n';
  return ok ? kOk : kMismatch;
}

}  // namespace

int cmd_fock_scheme(const Options& opts, const Config& config, std::ostream& log) {
  ensure_out_dir(opts.out);
  if (opts.fit) return run_fit(opts, config, log);

  struct Named {
    std::string table;
    CascadeColumn column;
  };
  std::vector<Named> columns;
  const auto given = config.text("fixture");
  const std::vector<fs::path> files =
      given.empty() ? std::vector<fs::path>{fixture_dir() / "table4.ini",
                                            fixture_dir() / "table5.ini",
                                            fixture_dir() / "table6.ini"}
                    : std::vector<fs::path>{fs::path(given)};
  for (const auto& f : files)
    for (auto& c : load_cascade_table(f)) columns.push_back({f.stem().string(), std::move(c)});
  const auto wanted = config.text("column");
  if (wanted != "all") {
    std::erase_if(columns, [&](const Named& c) { return c.column.name != wanted; });
    if (columns.empty()) throw InputError("no column named '" + wanted + "'");
  }

  const auto prov = provenance_line(config, opts.seed);
  CsvFile csv(opts.out / "fock_scheme.csv", prov,
              "table,column,parity,m,n,fidelity,probability,ref_fidelity,ref_probability,"
              "oracle_infidelity,oracle_probability_gap");
  constexpr double kFidelityTol = 5e-3;
  constexpr double kProbabilityRel = 0.2;
  constexpr double kOracleTol = 1e-8;
  bool all_ok = true;
  for (const auto& [table, c] : columns) {
    const auto out = cascade_output_state(c.config, opts.cutoff.value_or(-1), tail_tol(opts));
    const auto cat = scs_vector(c.parity, c.beta, out.state.cutoff(), tail_tol(opts));
    const double f = fidelity(out.state, cat);

    double oracle_gap = std::nan(""), oracle_p_gap = std::nan("");
    if (config.flag("check_oracle") && c.config.m() <= 3) {
      const auto oracle = oracle_cascade(c.config, out.state.cutoff(), -1, tail_tol(opts));
      oracle_gap = 1.0 - fidelity(out.state, oracle.state);
      oracle_p_gap = std::abs(out.probability - oracle.probability);
      if (!(std::abs(oracle_gap) <= kOracleTol) || !(oracle_p_gap <= kOracleTol * std::max(1.0, out.probability)))
        throw NumericalFailure(table + "/" + c.name + ": closed form and oracle disagree (1 - F = " +
                               fmt(oracle_gap, 3) + ", |dP| = " + fmt(oracle_p_gap, 3) + ")");
    }
    csv.row({table, c.name, std::string(to_string(c.parity)), std::to_string(c.config.m()),
             std::to_string(c.config.n()), fmt(f), fmt(out.probability), fmt(c.fidelity),
             fmt(c.probability), fmt(oracle_gap, 3), fmt(oracle_p_gap, 3)});
    log << table << '/' << c.name << ": F = " << fmt(f, 6) << ", P = " << fmt(out.probability, 4)
        << '\n';
    if (!opts.verify) continue;
    const bool f_ok = std::abs(f - c.fidelity) <= kFidelityTol;
    const bool p_ok = std::abs(out.probability - c.probability) <= kProbabilityRel * c.probability;
    all_ok = all_ok && f_ok && p_ok;
    log << pass_fail(f_ok && p_ok) << ' ' << table << '/' << c.name << ": F " << fmt(f, 5)
        << " vs " << c.fidelity << ", P " << fmt(out.probability, 4) << " vs " << c.probability
        << '\n';
  }
  log << "wrote " << (opts.out / "fock_scheme.csv").string() << '\n';
  return all_ok ? kOk : kMismatch;
}

int cmd_wigner(const Options& opts, const Config& config, std::ostream& log) {
  const int resolution = config.integer("resolution");
  require(resolution >= 16 && resolution <= 2048, "resolution must lie in [16, 2048]");
  const double half_width = config.real("half_width");
  require(half_width >= 0.0, "half_width must be >= 0 (0 picks the grid automatically)");

  auto columns = load_cascade_table(fixture_or_default(config, "table4.ini"));
  const auto wanted = config.text("column");
  if (wanted != "all") {
    std::erase_if(columns, [&](const CascadeColumn& c) { return c.name != wanted; });
    if (columns.empty()) throw InputError("no column named '" + wanted + "'");
  }

  ensure_out_dir(opts.out);
  const auto prov = provenance_line(config, opts.seed);
  CsvFile summary(opts.out / "wigner_summary.csv", prov,
                  "column,parity,vector_fidelity,wigner_fidelity,difference,min_W_scq,min_W_scs,"
                  "negative_volume_scq,negative_volume_scs,integral_scq,integral_scs");
  constexpr double kAgreement = 1e-6;
  constexpr double kFidelityTol = 5e-3;
  bool all_ok = true;
  for (const auto& c : columns) {
    const auto out = cascade_output_state(c.config, opts.cutoff.value_or(-1), tail_tol(opts));
    const auto cat = scs_vector(c.parity, c.beta, out.state.cutoff(), tail_tol(opts));
    const double f_vec = fidelity(out.state, cat);
    const GridSpec grid =
        half_width > 0.0
            ? GridSpec{-half_width, half_width, -half_width, half_width, resolution}
            : GridSpec::covering(std::numbers::sqrt2 * (std::abs(c.config.final_alpha) + c.beta),
                                 resolution);
    const auto w_scq = wigner_of(out.state, grid);
    const auto w_scs = wigner_of(cat, grid);
    const double f_wig = wigner_fidelity(w_scq, w_scs);
    const auto neg_scq = negativity_summary(w_scq);
    const auto neg_scs = negativity_summary(w_scs);

    for (const auto& [suffix, w] : {std::pair{"scq", &w_scq}, std::pair{"scs", &w_scs}}) {
      CsvFile grid_csv(opts.out / ("wigner_" + c.name + "_" + suffix + ".csv"), prov, "x,p,W");
      write_wigner_csv(grid_csv.stream(), *w);
      if (!w->normalization_ok)
        log << "warning: " << c.name << '/' << suffix << " grid integral " << fmt(w->integral, 8)
            << " differs from 1 by more than 1e-4\n";
    }
    summary.row({c.name, std::string(to_string(c.parity)), fmt(f_vec, 15), fmt(f_wig, 15),
                 fmt(f_wig - f_vec, 3), fmt(neg_scq.min_value), fmt(neg_scs.min_value),
                 fmt(neg_scq.negative_volume), fmt(neg_scs.negative_volume),
                 fmt(w_scq.integral, 12), fmt(w_scs.integral, 12)});
    log << c.name << ": vector F = " << fmt(f_vec, 12) << ", Wigner F = " << fmt(f_wig, 12)
        << ", min W = " << fmt(neg_scq.min_value, 4) << " / " << fmt(neg_scs.min_value, 4) << '\n';

    if (!opts.verify) continue;
    const bool ok = std::abs(f_wig - f_vec) <= kAgreement && neg_scq.min_value < 0.0 &&
                    neg_scs.min_value < 0.0 && std::abs(f_vec - c.fidelity) <= kFidelityTol &&
                    w_scq.normalization_ok && w_scs.normalization_ok;
    all_ok = all_ok && ok;
    log << pass_fail(ok) << ' ' << c.name << ": |F_wigner - F_vector| = "
        << fmt(std::abs(f_wig - f_vec), 3) << ", F " << fmt(f_vec, 5) << " vs " << c.fidelity
        << '\n';
  }
  return all_ok ? kOk : kMismatch;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cat qudit simulation and verification"};
  app.require_subcommand(1);
  Options opts;
  std::string config_path;
  std::string out_dir = ".";
  int cutoff = -1;
  double tol = -1.0;

  std::vector<CLI::App*> subs;
  for (const auto& name : kCommands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file (flat object)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--verify", opts.verify, "compare against reference fixtures");
    sub->add_option("--seed", opts.seed, "seed for randomized searches");
    sub->add_option("--cutoff", cutoff, "Fock cutoff override")->check(CLI::Range(1, 400));
    sub->add_option("--tol", tol, "truncation tail tolerance")->check(CLI::PositiveNumber);
    if (name == "fock-scheme") sub->add_flag("--fit", opts.fit, "fit cascade parameters");
    subs.push_back(sub);
  }

  std::vector<const char*> argv{"catq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (!config_path.empty()) opts.config = config_path;
  opts.out = out_dir;
  if (cutoff > 0) opts.cutoff = cutoff;
  if (tol > 0.0) opts.tol = tol;

  std::string command;
  for (auto* sub : subs)
    if (sub->parsed()) command = sub->get_name();

  try {
    const auto config = load_config(command, opts.config);
    if (command == "table1") return cmd_table1(opts, config, out);
    if (command == "fidelity-map") return cmd_fidelity_map(opts, config, out);
    if (command == "entangled") return cmd_entangled(opts, config, out);
    if (command == "fock-scheme") return cmd_fock_scheme(opts, config, out);
    return cmd_wigner(opts, config, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const FixtureError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DegenerateDisplacement& e) {
    err << "numerical failure: " << e.what() << " (index " << e.index() << ")\n";
    return kNumericalFailure;
  } catch (const CutoffError& e) {
    err << "numerical failure: " << e.what() << " (tail " << e.tail() << ")\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace catq::cli
