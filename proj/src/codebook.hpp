#pragma once

#include <string>
#include <vector>

#include "common.hpp"
#include "factor_graph.hpp"

namespace hdnoma {

struct CodebookError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One user's alphabet: num_words() sparse codewords over `dims` subcarriers,
// all sharing the same support of size spreading_degree().
struct Codebook {
  std::vector<int> support;   // sorted active subcarrier indices
  std::vector<CVec> words;    // words[m] has dims components, zero off support

  int num_words() const { return int(words.size()); }
  int spreading_degree() const { return int(support.size()); }
  double average_energy() const;
};

struct CodebookSet {
  int num_words = 0;  // alphabet size M, a power of two
  int dims = 0;       // subcarrier count K
  std::vector<Codebook> users;

  int user_count() const { return int(users.size()); }
  int bits_per_word() const;
  int spreading_degree() const { return users.empty() ? 0 : users[0].spreading_degree(); }
  // Graph induced by the user supports. Requires uniform column degrees.
  FactorGraph factor_graph() const;
};

// Built-in 6-user / 4-subcarrier / 4-word set. Each word splits its two bits
// into one antipodal point per occupied subcarrier, and each user applies its
// own phase rotation; codeword energy is exactly 1.
CodebookSet default_codebook_set();

// `layers` rotated copies of the default set stacked on the same supports
// (layer l adds an extra pi/12 * l offset). Used for the overloaded
// twelve-user SCMA baseline.
CodebookSet layered_codebook_set(int layers);

// Same stacking applied to an arbitrary base set.
CodebookSet stack_rotated_layers(const CodebookSet& base, int layers);

// Full-spread set for the power-domain baseline: every user occupies all
// `dims` subcarriers and repeats one unit-energy QPSK symbol across them.
CodebookSet spread_codebook_set(int user_count, int dims);

// Text format: header `users/words/dims`, then per user a `user <j>` line
// followed by `words` lines of `dims` (re, im) pairs. Throws CodebookError on
// parse failures, support mismatches, or energy off unit normalization.
CodebookSet load_codebook(const std::string& path);
CodebookSet parse_codebook(std::istream& in, const std::string& origin);

// Writes the same format; the inverse of load_codebook.
std::string format_codebook(const CodebookSet& set);

// Codeword lookup for a word index in [0, M). Throws std::out_of_range.
const CVec& encode(const CodebookSet& set, int user, unsigned word);

}  // namespace hdnoma
