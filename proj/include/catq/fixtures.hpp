#pragma once

// Reference data files. Two formats:
//   table1.csv        n,parity,alpha,beta   (alpha may carry a leading "±")
//   *.ini             [section] blocks of "key = value" lines; '#' starts a comment
// Complex entries accept 0.917, -0.27, i0.773, -i0.656, 0.814exp(i0.399π),
// 1.657·exp(-i0.46π), 0.814*exp(i0.399pi) and exp(i0.5π).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catq/cat_states.hpp"
#include "catq/fock_scheme.hpp"

namespace catq {

cplx parse_complex(std::string_view text);
// "±0.3409" -> 0.3409; otherwise a plain real.
double parse_real(std::string_view text);
std::vector<std::string> split_list(std::string_view text, char sep = ',');

class FixtureSection {
 public:
  explicit FixtureSection(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set(std::string key, std::string value);
  bool has(std::string_view key) const;
  // Throw FixtureError naming the section and key when absent or malformed.
  const std::string& text(std::string_view key) const;
  double real(std::string_view key) const;
  int integer(std::string_view key) const;
  cplx complex(std::string_view key) const;
  std::vector<cplx> complex_list(std::string_view key) const;
  std::vector<int> int_list(std::string_view key) const;

 private:
  std::string name_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct FixtureFile {
  std::string source;
  std::vector<FixtureSection> sections;

  const FixtureSection& section(std::string_view name) const;
};

FixtureFile parse_fixture(std::istream& in, const std::string& source = "<stream>");
FixtureFile load_fixture(const std::filesystem::path& path);

// Directory holding the shipped reference files (overridable with CATQ_FIXTURES).
std::filesystem::path fixture_dir();

struct Table1Entry {
  int n = 0;
  Parity parity = Parity::even;
  double alpha = 0.0;  // |alpha|
  double beta = 0.0;
};
std::vector<Table1Entry> load_table1(const std::filesystem::path& path);

// Tabulated splitter pair; printed to three decimals, so not exactly unitary.
struct SplitterPair {
  cplx t;
  cplx r;
};

struct EntangledColumn {
  std::string name;
  CatSpec spec;
  double alpha_prime = 0.0;
  int k = 0;
  double probability = 0.0;
  std::vector<SplitterPair> splitters;
};
std::vector<EntangledColumn> load_entangled_table(const std::filesystem::path& path);

struct SplitterMatch {
  std::vector<int> assignment;  // reference index -> computed index
  double max_t_error = 0.0;
  double max_r_error = 0.0;
};

// Pairs each reference splitter with a computed one, minimizing the summed |dt| + |dr| after
// rotating both so that t is real and non-negative.
SplitterMatch match_splitters(const std::vector<SplitterPair>& reference,
                              const std::vector<BeamSplitter>& computed);

struct CascadeColumn {
  std::string name;
  Parity parity = Parity::even;
  double beta = 0.0;
  CascadeConfig config;
  double fidelity = 0.0;
  double probability = 0.0;
};
// Applies the file's `reflection` (or explicit `r` list) and `displacement_convention` keys.
std::vector<CascadeColumn> load_cascade_table(const std::filesystem::path& path);

}  // namespace catq
