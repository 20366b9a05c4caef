#include "catq/fixtures.hpp"

#include "catq/assignment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#ifndef CATQ_FIXTURE_DIR
#define CATQ_FIXTURE_DIR "fixtures"
#endif

namespace catq {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
}

double to_double(const std::string& s, std::string_view what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || s.empty())
    throw FixtureError("cannot parse number '" + s + "' in " + std::string(what));
  return v;
}

}  // namespace

cplx parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  replace_all(s, "\xC2\xB7", "");  // middle dot
  replace_all(s, "\xCF\x80", "pi");  // greek pi
  replace_all(s, "*", "");
  static const std::regex pattern(
      R"(^([+-]?)(i?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:exp\(([+-]?)i((?:\d+\.?\d*|\.\d+))(pi)?\))?$)");
  std::smatch m;
  if (s.empty() || !std::regex_match(s, m, pattern) || (!m[3].matched && !m[5].matched))
    throw FixtureError("cannot parse complex value '" + std::string(text) + "'");
  const double sign = m[1] == "-" ? -1.0 : 1.0;
  const double modulus = m[3].matched ? to_double(m[3].str(), text) : 1.0;
  cplx value = sign * modulus;
  if (m[2].matched && m[2].length() > 0) value *= cplx{0.0, 1.0};
  if (m[5].matched) {
    double angle = to_double(m[5].str(), text);
    if (m[4] == "-") angle = -angle;
    if (m[6].matched) angle *= std::numbers::pi;
    value *= std::polar(1.0, angle);
  }
  return value;
}

double parse_real(std::string_view text) {
  std::string s = trim(text);
  replace_all(s, "\xC2\xB1", "");  // plus-minus sign
  s = trim(s);
  return to_double(s, text);
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void FixtureSection::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) throw FixtureError("duplicate key '" + key + "' in [" + name_ + "]");
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

bool FixtureSection::has(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

const std::string& FixtureSection::text(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw FixtureError("missing key '" + std::string(key) + "' in [" + name_ + "]");
}

double FixtureSection::real(std::string_view key) const {
  try {
    return parse_real(text(key));
  } catch (const FixtureError& e) {
    throw FixtureError("[" + name_ + "] " + std::string(key) + ": " + e.what());
  }
}

int FixtureSection::integer(std::string_view key) const {
  const double v = real(key);
  if (v != std::floor(v)) throw FixtureError("[" + name_ + "] " + std::string(key) + ": not an integer");
  return static_cast<int>(v);
}

cplx FixtureSection::complex(std::string_view key) const {
  try {
    return parse_complex(text(key));
  } catch (const FixtureError& e) {
    throw FixtureError("[" + name_ + "] " + std::string(key) + ": " + e.what());
  }
}

std::vector<cplx> FixtureSection::complex_list(std::string_view key) const {
  std::vector<cplx> out;
  for (const auto& item : split_list(text(key))) {
    try {
      out.push_back(parse_complex(item));
    } catch (const FixtureError& e) {
      throw FixtureError("[" + name_ + "] " + std::string(key) + ": " + e.what());
    }
  }
  return out;
}

std::vector<int> FixtureSection::int_list(std::string_view key) const {
  std::vector<int> out;
  for (const auto& item : split_list(text(key))) {
    const double v = parse_real(item);
    if (v != std::floor(v)) throw FixtureError("[" + name_ + "] " + std::string(key) + ": not an integer");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

const FixtureSection& FixtureFile::section(std::string_view name) const {
  for (const auto& s : sections)
    if (s.name() == name) return s;
  throw FixtureError(source + ": no section [" + std::string(name) + "]");
}

FixtureFile parse_fixture(std::istream& in, const std::string& source) {
  FixtureFile file;
  file.source = source;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) throw FixtureError(where + ": bad section header");
      const std::string name = trim(std::string_view(body).substr(1, body.size() - 2));
      for (const auto& s : file.sections)
        if (s.name() == name) throw FixtureError(where + ": duplicate section [" + name + "]");
      file.sections.emplace_back(name);
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw FixtureError(where + ": expected key = value");
    if (file.sections.empty()) throw FixtureError(where + ": entry before any section");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) throw FixtureError(where + ": empty key or value");
    file.sections.back().set(key, value);
  }
  return file;
}

FixtureFile load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open fixture " + path.string());
  return parse_fixture(in, path.string());
}

std::filesystem::path fixture_dir() {
  if (const char* env = std::getenv("CATQ_FIXTURES"); env != nullptr && *env != '\0') return env;
  return CATQ_FIXTURE_DIR;
}

std::vector<Table1Entry> load_table1(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open fixture " + path.string());
  std::vector<Table1Entry> rows;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split_list(body);
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (!header_seen) {
      if (cells != std::vector<std::string>{"n", "parity", "alpha", "beta"})
        throw FixtureError(where + ": expected header n,parity,alpha,beta");
      header_seen = true;
      continue;
    }
    if (cells.size() != 4) throw FixtureError(where + ": expected 4 columns");
    try {
      Table1Entry e;
      e.n = static_cast<int>(parse_real(cells[0]));
      e.parity = parse_parity(cells[1]);
      e.alpha = std::abs(parse_real(cells[2]));
      e.beta = parse_real(cells[3]);
      rows.push_back(e);
    } catch (const std::exception& ex) {
      throw FixtureError(where + ": " + ex.what());
    }
  }
  if (rows.empty()) throw FixtureError(path.string() + ": no rows");
  return rows;
}

std::vector<EntangledColumn> load_entangled_table(const std::filesystem::path& path) {
  const auto file = load_fixture(path);
  std::vector<EntangledColumn> out;
  for (const auto& s : file.sections) {
    EntangledColumn c;
    c.name = s.name();
    try {
      c.spec.parity = parse_parity(s.text("parity"));
    } catch (const DomainError& e) {
      throw FixtureError("[" + s.name() + "] " + e.what());
    }
    c.spec.n = s.integer("n");
    c.spec.beta = s.real("beta");
    c.spec.alpha = s.real("alpha");
    c.alpha_prime = s.real("alpha_prime");
    c.k = s.integer("k");
    c.probability = s.real("probability");
    const auto t = s.complex_list("t");
    const auto r = s.complex_list("r");
    if (t.size() != r.size() || static_cast<int>(t.size()) != c.spec.n)
      throw FixtureError("[" + s.name() + "] expected n entries in t and r");
    for (std::size_t i = 0; i < t.size(); ++i) c.splitters.push_back({t[i], r[i]});
    out.push_back(std::move(c));
  }
  if (out.empty()) throw FixtureError(path.string() + ": no sections");
  return out;
}

SplitterMatch match_splitters(const std::vector<SplitterPair>& reference,
                              const std::vector<BeamSplitter>& computed) {
  if (reference.size() != computed.size())
    throw DomainError("match_splitters: reference and computed sizes differ");
  auto canonical = [](cplx t, cplx r) {
    if (std::abs(t) > 0.0) {
      const cplx phase = std::conj(t) / std::abs(t);
      t *= phase;
      r *= phase;
    }
    return std::pair{t, r};
  };
  const std::size_t n = reference.size();
  std::vector<std::pair<cplx, cplx>> ref(n), comp(n);
  for (std::size_t i = 0; i < n; ++i) {
    ref[i] = canonical(reference[i].t, reference[i].r);
    comp[i] = canonical(computed[i].t, computed[i].r);
  }
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost[i][j] = std::abs(ref[i].first - comp[j].first) + std::abs(ref[i].second - comp[j].second);
  SplitterMatch out;
  out.assignment = optimal_assignment(cost);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = comp[out.assignment[i]];
    out.max_t_error = std::max(out.max_t_error, std::abs(ref[i].first - c.first));
    out.max_r_error = std::max(out.max_r_error, std::abs(ref[i].second - c.second));
  }
  return out;
}

std::vector<CascadeColumn> load_cascade_table(const std::filesystem::path& path) {
  const auto file = load_fixture(path);
  std::vector<CascadeColumn> out;
  for (const auto& s : file.sections) {
    CascadeColumn c;
    c.name = s.name();
    try {
      c.parity = parse_parity(s.text("parity"));
    } catch (const DomainError& e) {
      throw FixtureError("[" + s.name() + "] " + e.what());
    }
    c.beta = s.real("beta");
    c.fidelity = s.real("fidelity");
    c.probability = s.real("probability");
    c.config.photons = s.int_list("photons");
    c.config.final_alpha = s.real("alpha");
    const auto t = s.complex_list("t");
    auto disp = s.complex_list("alpha_j");
    const std::string reflection = s.has("reflection") ? s.text("reflection") : "real_positive";
    const std::string convention =
        s.has("displacement_convention") ? s.text("displacement_convention") : "direct";
    if (t.size() != disp.size() || t.size() + 1 != c.config.photons.size())
      throw FixtureError("[" + s.name() + "] need m entries in t and alpha_j and m + 1 photons");
    if (s.has("r")) {
      // Explicit reflection amplitudes; the reflection key is ignored.
      const auto r = s.complex_list("r");
      if (r.size() != t.size()) throw FixtureError("[" + s.name() + "] t and r differ in length");
      for (std::size_t j = 0; j < t.size(); ++j) {
        const double scale = 1.0 / std::sqrt(std::norm(t[j]) + std::norm(r[j]));
        if (std::abs(scale - 1.0) > 1e-6)
          throw FixtureError("[" + s.name() + "] splitter " + std::to_string(j + 1) +
                             " is not unitary");
        c.config.bs.emplace_back(t[j] * scale, r[j] * scale);
      }
    }
    for (const auto& tj : s.has("r") ? std::vector<cplx>{} : t) {
      const double rest = 1.0 - std::norm(tj);
      if (rest < -1e-12) throw FixtureError("[" + s.name() + "] |t| exceeds 1");
      const double r = std::sqrt(std::max(0.0, rest));
      cplx rj;
      if (reflection == "real_positive") {
        rj = r;
      } else if (reflection == "real_negative") {
        rj = -r;
      } else {
        throw FixtureError("[" + s.name() + "] unknown reflection '" + reflection + "'");
      }
      // Renormalize so the splitter is unitary to machine precision.
      const double scale = 1.0 / std::sqrt(std::norm(tj) + std::norm(rj));
      c.config.bs.emplace_back(tj * scale, rj * scale);
    }
    if (convention == "conjugate") {
      for (auto& a : disp) a = std::conj(a);
    } else if (convention != "direct") {
      throw FixtureError("[" + s.name() + "] unknown displacement_convention '" + convention + "'");
    }
    c.config.disp = std::move(disp);
    try {
      c.config.validate();
    } catch (const DomainError& e) {
      throw FixtureError("[" + s.name() + "] " + e.what());
    }
    out.push_back(std::move(c));
  }
  if (out.empty()) throw FixtureError(path.string() + ": no sections");
  return out;
}

}  // namespace catq
