#include "codebook.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hdnoma {

double Codebook::average_energy() const {
  double e = 0.0;
  for (const CVec& w : words)
    for (const cplx& c : w) e += std::norm(c);
  return words.empty() ? 0.0 : e / double(words.size());
}

int CodebookSet::bits_per_word() const {
  int b = 0;
  while ((1 << b) < num_words) ++b;
  return b;
}

FactorGraph CodebookSet::factor_graph() const {
  FactorGraph g;
  g.users = user_count();
  g.subcarriers = dims;
  g.row_degree = spreading_degree();
  g.entries.assign(size_t(g.users) * dims, 0);
  for (int j = 0; j < g.users; ++j)
    for (int k : users[j].support) g.set(j, k, 1);
  std::vector<int> col(dims, 0);
  for (int k = 0; k < dims; ++k)
    for (int j = 0; j < g.users; ++j) col[k] += g.at(j, k);
  for (int k = 1; k < dims; ++k)
    if (col[k] != col[0])
      throw CodebookError("codebook supports induce unequal subcarrier loads");
  g.col_degree = dims > 0 ? col[0] : 0;
  return g;
}

namespace {

Codebook make_rotated_user(const std::vector<int>& support, int dims, double angle) {
  // Word m repeats one QPSK point on both occupied subcarriers, rotated by
  // the user angle. The repetition gives each word second-order diversity;
  // component magnitude 1/sqrt(2) makes every codeword unit energy.
  constexpr int kWords = 4;
  const double amp = 1.0 / std::sqrt(2.0);
  Codebook cb;
  cb.support = support;
  cb.words.assign(kWords, CVec(dims, cplx(0.0, 0.0)));
  for (int m = 0; m < kWords; ++m) {
    cplx q = std::polar(amp, kPi / 4.0 + kPi * m / 2.0 + angle);
    cb.words[m][support[0]] = q;
    cb.words[m][support[1]] = q;
  }
  return cb;
}

}  // namespace

CodebookSet default_codebook_set() {
  // User angles step by pi/12: distinct modulo the pi/2 symmetry of QPSK, so
  // no two users sharing a subcarrier present the same point set there.
  FactorGraph base = canonical_factor_graph(6, 4, 2);
  CodebookSet set;
  set.num_words = 4;
  set.dims = 4;
  for (int j = 0; j < base.users; ++j)
    set.users.push_back(make_rotated_user(base.row_support(j), set.dims, kPi * j / 12.0));
  return set;
}

CodebookSet layered_codebook_set(int layers) {
  return stack_rotated_layers(default_codebook_set(), layers);
}

CodebookSet stack_rotated_layers(const CodebookSet& base, int layers) {
  if (layers < 1) throw CodebookError("stack_rotated_layers: layers must be >= 1");
  CodebookSet set;
  set.num_words = base.num_words;
  set.dims = base.dims;
  for (int l = 0; l < layers; ++l) {
    const cplx rot = std::polar(1.0, kPi * l / 24.0);
    for (const Codebook& cb : base.users) {
      Codebook copy = cb;
      for (CVec& w : copy.words)
        for (cplx& c : w) c *= rot;
      set.users.push_back(std::move(copy));
    }
  }
  return set;
}

CodebookSet spread_codebook_set(int user_count, int dims) {
  if (user_count < 1 || dims < 1)
    throw CodebookError("spread_codebook_set: bad dimensions");
  CodebookSet set;
  set.num_words = 4;
  set.dims = dims;
  const double amp = 1.0 / std::sqrt(double(dims));
  for (int j = 0; j < user_count; ++j) {
    Codebook cb;
    cb.support.resize(dims);
    for (int k = 0; k < dims; ++k) cb.support[k] = k;
    cb.words.assign(4, CVec(dims, cplx(0.0, 0.0)));
    for (int m = 0; m < 4; ++m) {
      cplx s = std::polar(amp, kPi / 4.0 + kPi * m / 2.0);
      for (int k = 0; k < dims; ++k) cb.words[m][k] = s;
    }
    set.users.push_back(std::move(cb));
  }
  return set;
}

namespace {

void validate_set(CodebookSet& set, const std::string& origin) {
  if (set.num_words < 2 || (set.num_words & (set.num_words - 1)) != 0)
    throw CodebookError(origin + ": alphabet size must be a power of two >= 2");
  if (set.users.empty()) throw CodebookError(origin + ": no users");
  int df = -1;
  for (size_t j = 0; j < set.users.size(); ++j) {
    Codebook& cb = set.users[j];
    std::ostringstream who;
    who << origin << ": user " << j;
    if (int(cb.words.size()) != set.num_words)
      throw CodebookError(who.str() + " has wrong word count");
    // support = nonzero pattern of word 0; all words must share it
    cb.support.clear();
    for (int k = 0; k < set.dims; ++k)
      if (std::norm(cb.words[0][k]) > 0.0) cb.support.push_back(k);
    if (cb.support.empty()) throw CodebookError(who.str() + " has an all-zero word");
    for (int m = 0; m < set.num_words; ++m) {
      for (int k = 0; k < set.dims; ++k) {
        bool active = std::norm(cb.words[m][k]) > 0.0;
        bool in_support =
            std::find(cb.support.begin(), cb.support.end(), k) != cb.support.end();
        if (active != in_support) {
          std::ostringstream os;
          os << who.str() << " word " << m << " support differs from the user support";
          throw CodebookError(os.str());
        }
      }
    }
    if (df < 0) df = cb.spreading_degree();
    if (cb.spreading_degree() != df)
      throw CodebookError(who.str() + " has a different spreading degree");
    double e = cb.average_energy();
    if (std::abs(e - 1.0) > 1e-9) {
      std::ostringstream os;
      os << who.str() << " average codeword energy " << e << " is not 1";
      throw CodebookError(os.str());
    }
  }
}

}  // namespace

CodebookSet parse_codebook(std::istream& in, const std::string& origin) {
  auto next_token = [&in]() -> std::string {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    return {};
  };
  auto expect_int = [&](const char* what) -> int {
    std::string tok = next_token();
    if (tok.empty()) throw CodebookError(origin + ": unexpected end of file reading " + what);
    try {
      size_t pos = 0;
      int v = std::stoi(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw CodebookError(origin + ": expected integer for " + what + ", got '" + tok + "'");
    }
  };
  auto expect_double = [&](const char* what) -> double {
    std::string tok = next_token();
    if (tok.empty()) throw CodebookError(origin + ": unexpected end of file reading " + what);
    try {
      size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw CodebookError(origin + ": expected number for " + what + ", got '" + tok + "'");
    }
  };
  auto expect_keyword = [&](const char* kw) {
    std::string tok = next_token();
    if (tok != kw)
      throw CodebookError(origin + ": expected '" + kw + "', got '" +
                          (tok.empty() ? std::string("<eof>") : tok) + "'");
  };

  CodebookSet set;
  expect_keyword("users");
  int user_count = expect_int("users");
  expect_keyword("words");
  set.num_words = expect_int("words");
  expect_keyword("dims");
  set.dims = expect_int("dims");
  if (user_count < 1 || set.num_words < 1 || set.dims < 1)
    throw CodebookError(origin + ": non-positive header field");

  for (int j = 0; j < user_count; ++j) {
    expect_keyword("user");
    int idx = expect_int("user index");
    if (idx != j) {
      std::ostringstream os;
      os << origin << ": user blocks out of order (got " << idx << ", want " << j << ")";
      throw CodebookError(os.str());
    }
    Codebook cb;
    cb.words.assign(set.num_words, CVec(set.dims, cplx(0.0, 0.0)));
    for (int m = 0; m < set.num_words; ++m)
      for (int k = 0; k < set.dims; ++k) {
        double re = expect_double("component");
        double im = expect_double("component");
        cb.words[m][k] = cplx(re, im);
      }
    set.users.push_back(std::move(cb));
  }
  std::string trailing = next_token();
  if (!trailing.empty())
    throw CodebookError(origin + ": trailing content '" + trailing + "'");

  validate_set(set, origin);
  return set;
}

CodebookSet load_codebook(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CodebookError("cannot open codebook file '" + path + "'");
  return parse_codebook(in, path);
}

std::string format_codebook(const CodebookSet& set) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "users " << set.user_count() << "\n";
  os << "words " << set.num_words << "\n";
  os << "dims " << set.dims << "\n";
  for (int j = 0; j < set.user_count(); ++j) {
    os << "user " << j << "\n";
    for (int m = 0; m < set.num_words; ++m) {
      for (int k = 0; k < set.dims; ++k) {
        if (k) os << "  ";
        os << set.users[j].words[m][k].real() << " " << set.users[j].words[m][k].imag();
      }
      os << "\n";
    }
  }
  return os.str();
}

const CVec& encode(const CodebookSet& set, int user, unsigned word) {
  if (user < 0 || user >= set.user_count())
    throw std::out_of_range("encode: user index out of range");
  if (word >= unsigned(set.num_words))
    throw std::out_of_range("encode: word out of range");
  return set.users[user].words[word];
}

}  // namespace hdnoma
