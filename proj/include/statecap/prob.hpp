#pragma once
// Exact finite-alphabet probability objects and the Shannon measures built
// on them. Joint tables are dense, coordinates are addressed by name, and
// every value is immutable after construction, so everything here is safe
// to share across threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace statecap {

constexpr double kPmfSumTol = 1e-9;
constexpr double kMassTol = 1e-12;
constexpr double kMiClampTol = 1e-12;

inline double log2_safe(double x) { return x > 0.0 ? std::log2(x) : 0.0; }

/// -sum p log2 p over a raw table, with 0 log 0 = 0.
inline double entropy_of_table(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64 core). std:: distributions are avoided so
// that identical seeds give identical streams regardless of libstdc++.
// ---------------------------------------------------------------------------
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0,1]; never returns 0 so -log is always finite.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  /// Categorical draw from a normalized weight table.
  int categorical(const std::vector<double>& p) {
    double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      acc += p[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Pmf
// ---------------------------------------------------------------------------
class Pmf {
 public:
  explicit Pmf(std::vector<double> probs) : p_(std::move(probs)) { validate(); }

  static Pmf uniform(int n) {
    if (n < 1) throw std::invalid_argument("Pmf: alphabet size must be >= 1");
    return Pmf(std::vector<double>(n, 1.0 / n));
  }

  static Pmf point_mass(int n, int i) {
    if (i < 0 || i >= n) throw std::invalid_argument("Pmf: point mass index out of range");
    std::vector<double> p(n, 0.0);
    p[i] = 1.0;
    return Pmf(std::move(p));
  }

  static Pmf dirichlet(int n, Rng& rng) {
    std::vector<double> p(n);
    double s = 0.0;
    for (double& v : p) s += (v = -std::log(rng.uniform_pos()));
    for (double& v : p) v /= s;
    return Pmf(std::move(p));
  }

  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[i]; }
  const std::vector<double>& probs() const { return p_; }

 private:
  void validate() const {
    if (p_.empty()) throw std::invalid_argument("Pmf: alphabet size must be >= 1");
    double s = 0.0;
    for (double v : p_) {
      if (!(v >= -1e-15)) throw std::invalid_argument("Pmf: negative entry");
      s += v;
    }
    if (std::abs(s - 1.0) > kPmfSumTol) throw std::invalid_argument("Pmf: entries must sum to 1");
  }

  std::vector<double> p_;
};

inline double entropy(const Pmf& p) { return entropy_of_table(p.probs()); }

/// Binary entropy in bits.
inline double binary_entropy(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

// ---------------------------------------------------------------------------
// CondPmf: one pmf row per conditioning symbol, stored row-major.
// ---------------------------------------------------------------------------
class CondPmf {
 public:
  CondPmf(int n_in, int n_out, std::vector<double> table)
      : in_(n_in), out_(n_out), t_(std::move(table)) {
    if (in_ < 1 || out_ < 1 || t_.size() != static_cast<std::size_t>(in_) * out_)
      throw std::invalid_argument("CondPmf: dimension mismatch");
    for (int r = 0; r < in_; ++r) {
      double s = 0.0;
      for (int c = 0; c < out_; ++c) {
        double v = t_[static_cast<std::size_t>(r) * out_ + c];
        if (!(v >= -1e-15)) throw std::invalid_argument("CondPmf: negative entry");
        s += v;
      }
      if (std::abs(s - 1.0) > kPmfSumTol)
        throw std::invalid_argument("CondPmf: row " + std::to_string(r) + " does not sum to 1");
    }
  }

  static CondPmf uniform(int n_in, int n_out) {
    return CondPmf(n_in, n_out, std::vector<double>(static_cast<std::size_t>(n_in) * n_out, 1.0 / n_out));
  }

  /// Deterministic rows: row r puts all mass on map[r].
  static CondPmf from_map(int n_in, int n_out, const std::vector<int>& map) {
    if (static_cast<int>(map.size()) != n_in) throw std::invalid_argument("CondPmf: map size mismatch");
    std::vector<double> t(static_cast<std::size_t>(n_in) * n_out, 0.0);
    for (int r = 0; r < n_in; ++r) {
      if (map[r] < 0 || map[r] >= n_out) throw std::invalid_argument("CondPmf: map value out of range");
      t[static_cast<std::size_t>(r) * n_out + map[r]] = 1.0;
    }
    return CondPmf(n_in, n_out, std::move(t));
  }

  int n_in() const { return in_; }
  int n_out() const { return out_; }
  double at(int r, int c) const { return t_[static_cast<std::size_t>(r) * out_ + c]; }
  const std::vector<double>& table() const { return t_; }

  Pmf row(int r) const {
    return Pmf(std::vector<double>(t_.begin() + static_cast<std::ptrdiff_t>(r) * out_,
                                   t_.begin() + static_cast<std::ptrdiff_t>(r + 1) * out_));
  }

  CondPmf with_row(int r, const std::vector<double>& row) const {
    std::vector<double> t = t_;
    std::copy(row.begin(), row.end(), t.begin() + static_cast<std::ptrdiff_t>(r) * out_);
    return CondPmf(in_, out_, std::move(t));
  }

 private:
  int in_, out_;
  std::vector<double> t_;
};

// ---------------------------------------------------------------------------
// JointPmf: dense table over a Cartesian product of named coordinates.
// First declared coordinate varies slowest (row-major).
// ---------------------------------------------------------------------------
struct Coord {
  std::string name;
  int size = 0;
};

class JointPmf {
 public:
  JointPmf(std::vector<Coord> coords, std::vector<double> table)
      : coords_(std::move(coords)), p_(std::move(table)) {
    std::size_t n = 1;
    for (const auto& c : coords_) {
      if (c.size < 1) throw std::invalid_argument("JointPmf: coordinate size must be >= 1");
      for (const auto& d : coords_)
        if (&c != &d && c.name == d.name)
          throw std::invalid_argument("JointPmf: duplicate coordinate name " + c.name);
      n *= static_cast<std::size_t>(c.size);
    }
    if (p_.size() != n) throw std::invalid_argument("JointPmf: table length mismatch");
    double s = 0.0;
    for (double v : p_) {
      if (!(v >= -1e-15)) throw std::invalid_argument("JointPmf: negative entry");
      s += v;
    }
    if (std::abs(s - 1.0) > kPmfSumTol) throw std::invalid_argument("JointPmf: mass must be 1");
  }

  static JointPmf from_pmf(const std::string& name, const Pmf& p) {
    return JointPmf({{name, p.size()}}, p.probs());
  }

  static JointPmf random(const std::vector<Coord>& coords, Rng& rng) {
    std::size_t n = 1;
    for (const auto& c : coords) n *= static_cast<std::size_t>(c.size);
    std::vector<double> t(n);
    double s = 0.0;
    for (double& v : t) s += (v = -std::log(rng.uniform_pos()));
    for (double& v : t) v /= s;
    return JointPmf(coords, std::move(t));
  }

  const std::vector<Coord>& coords() const { return coords_; }
  const std::vector<double>& table() const { return p_; }
  std::size_t table_size() const { return p_.size(); }

  double mass() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

  int coord_index(const std::string& name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("JointPmf: unknown coordinate " + name);
  }

  int coord_size(const std::string& name) const { return coords_[coord_index(name)].size; }

  /// Flat marginal table over the named coordinates, in the order listed.
  std::vector<double> marginal_table(const std::vector<std::string>& keep) const {
    std::vector<std::size_t> strides = subset_strides(keep);
    std::size_t m = 1;
    for (const auto& nm : keep) m *= static_cast<std::size_t>(coord_size(nm));
    std::vector<double> out(m, 0.0);
    const std::size_t n = p_.size();
    for (std::size_t idx = 0; idx < n; ++idx) out[subset_index(idx, strides)] += p_[idx];
    return out;
  }

  JointPmf marginal(const std::vector<std::string>& keep) const {
    std::vector<Coord> cs;
    cs.reserve(keep.size());
    for (const auto& nm : keep) cs.push_back(coords_[coord_index(nm)]);
    return JointPmf(std::move(cs), marginal_table(keep));
  }

  /// H(of) in bits.
  double entropy(const std::vector<std::string>& of) const {
    if (of.empty()) return 0.0;
    return entropy_of_table(marginal_table(of));
  }

  /// H(target | given) = H(target, given) - H(given).
  double conditional_entropy(std::vector<std::string> target,
                             const std::vector<std::string>& given) const {
    require_disjoint(target, given);
    double hg = entropy(given);
    target.insert(target.end(), given.begin(), given.end());
    return entropy(target) - hg;
  }

  /// I(a ; b | given) in bits, clamped at zero when within kMiClampTol below it.
  double mutual(const std::vector<std::string>& a, const std::vector<std::string>& b,
                const std::vector<std::string>& given = {}) const {
    require_disjoint(a, b);
    require_disjoint(a, given);
    require_disjoint(b, given);
    std::vector<std::string> ag = cat(a, given), bg = cat(b, given), abg = cat(cat(a, b), given);
    double i = entropy(ag) + entropy(bg) - entropy(abg) - entropy(given);
    if (i < 0.0 && i > -kMiClampTol) i = 0.0;
    return i;
  }

  /// Multiply in a conditional block: new coordinates `added` distributed as
  /// cond given the coordinates `given` (rows indexed row-major in the order
  /// listed, first name slowest; columns likewise over `added`).
  JointPmf extend(const std::vector<std::string>& given, const std::vector<Coord>& added,
                  const CondPmf& cond) const {
    std::size_t rows = 1;
    for (const auto& nm : given) rows *= static_cast<std::size_t>(coord_size(nm));
    std::size_t cols = 1;
    for (const auto& c : added) cols *= static_cast<std::size_t>(c.size);
    if (static_cast<std::size_t>(cond.n_in()) != rows || static_cast<std::size_t>(cond.n_out()) != cols)
      throw std::invalid_argument("JointPmf::extend: conditional dimensions mismatch");

    std::vector<std::size_t> strides = subset_strides(given);
    std::vector<Coord> cs = coords_;
    cs.insert(cs.end(), added.begin(), added.end());
    const std::size_t n = p_.size();
    std::vector<double> t(n * cols);
    for (std::size_t idx = 0; idx < n; ++idx) {
      const double base = p_[idx];
      const std::size_t row = subset_index(idx, strides);
      double* dst = t.data() + idx * cols;
      if (base == 0.0) {
        std::fill(dst, dst + cols, 0.0);
        continue;
      }
      for (std::size_t c = 0; c < cols; ++c) dst[c] = base * cond.at(static_cast<int>(row), static_cast<int>(c));
    }
    return JointPmf(std::move(cs), std::move(t));
  }

  /// Add a coordinate that is a deterministic function of `given`
  /// (map indexed like extend's rows).
  JointPmf extend_map(const std::vector<std::string>& given, const Coord& added,
                      const std::vector<int>& map) const {
    std::size_t rows = 1;
    for (const auto& nm : given) rows *= static_cast<std::size_t>(coord_size(nm));
    if (map.size() != rows) throw std::invalid_argument("JointPmf::extend_map: map size mismatch");
    return extend(given, {added}, CondPmf::from_map(static_cast<int>(rows), added.size, map));
  }

  JointPmf renamed(const std::string& from, const std::string& to) const {
    std::vector<Coord> cs = coords_;
    cs[coord_index(from)].name = to;
    return JointPmf(std::move(cs), p_);
  }

 private:
  static std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  static void require_disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const auto& x : a)
      for (const auto& y : b)
        if (x == y) throw std::invalid_argument("JointPmf: coordinate sets must be disjoint: " + x);
  }

  // For each full-table index, the subset index is sum over kept coords of
  // digit * stride. Encoded as one stride per *joint* coordinate (zero when
  // the coordinate is dropped).
  std::vector<std::size_t> subset_strides(const std::vector<std::string>& keep) const {
    std::vector<std::size_t> stride(coords_.size(), 0);
    std::size_t s = 1;
    for (auto it = keep.rbegin(); it != keep.rend(); ++it) {
      int ci = coord_index(*it);
      if (stride[ci] != 0) throw std::invalid_argument("JointPmf: repeated coordinate " + *it);
      stride[ci] = s;
      s *= static_cast<std::size_t>(coords_[ci].size);
    }
    return stride;
  }

  std::size_t subset_index(std::size_t idx, const std::vector<std::size_t>& stride) const {
    std::size_t out = 0;
    for (std::size_t ci = coords_.size(); ci-- > 0;) {
      const std::size_t sz = static_cast<std::size_t>(coords_[ci].size);
      const std::size_t digit = idx % sz;
      idx /= sz;
      out += digit * stride[ci];
    }
    return out;
  }

  std::vector<Coord> coords_;
  std::vector<double> p_;
};

/// Row index helper matching JointPmf::extend's row-major convention.
inline int pack_index(const std::vector<int>& sizes, const std::vector<int>& digits) {
  int idx = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) idx = idx * sizes[i] + digits[i];
  return idx;
}

/// Visit every composition of `total` into `parts` nonnegative integers, in
/// lexicographically decreasing order starting from (total,0,...,0).
template <typename Fn>
void for_each_composition(int total, int parts, Fn&& fn) {
  if (parts < 1 || total < 0) throw std::invalid_argument("for_each_composition: bad arguments");
  std::vector<int> comp(parts, 0);
  comp[0] = total;
  while (true) {
    fn(static_cast<const std::vector<int>&>(comp));
    int i = parts - 2;
    while (i >= 0 && comp[i] == 0) --i;
    if (i < 0) break;
    --comp[i];
    int rest = 1;
    for (int j = i + 1; j < parts - 1; ++j) {
      rest += comp[j];
      comp[j] = 0;
    }
    rest += comp[parts - 1];
    comp[parts - 1] = 0;
    comp[i + 1] = rest;
  }
}

/// C(total+parts-1, parts-1), saturating at a large cap instead of overflowing.
inline unsigned long long composition_count(int total, int parts) {
  unsigned long long c = 1;
  for (int i = 1; i < parts; ++i) {
    if (c > (1ULL << 62) / static_cast<unsigned long long>(total + i)) return 1ULL << 62;
    c = c * static_cast<unsigned long long>(total + i) / static_cast<unsigned long long>(i);
  }
  return c;
}

}  // namespace statecap
