#pragma once

// Dense tensors and exterior algebra in an orthonormal frame.
//
// Conventions: the frame metric is the identity, so upper and lower indices
// are interchangeable.  A p-form chi is stored through all of its components
// chi_{i1..ip}, with chi = (1/p!) chi_{i1..ip} e^{i1}^...^e^{ip}; thus
// e^1^e^2 has component (1,2) = +1 and (2,1) = -1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace tg {

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxDim = 16;

namespace detail {

inline long long factorial(int n) {
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Sign of the permutation taking 0..n-1 to `p`.
inline int permutation_sign(std::span<const int> p) {
  std::vector<int> q(p.begin(), p.end());
  int sign = 1;
  for (std::size_t i = 0; i < q.size(); ++i) {
    while (q[i] != static_cast<int>(i)) {
      std::swap(q[i], q[static_cast<std::size_t>(q[i])]);
      sign = -sign;
    }
  }
  return sign;
}

/// Sign needed to sort `idx` ascending; 0 if an index repeats.
inline int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  return sign;
}

/// All strictly increasing k-subsets of {0..n-1}, lexicographic.
inline std::vector<std::vector<int>> increasing_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> s(static_cast<std::size_t>(k));
  std::iota(s.begin(), s.end(), 0);
  while (true) {
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++s[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

inline std::vector<std::vector<int>> all_permutations(int k) {
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace detail

class FrameTensor {
 public:
  FrameTensor() = default;

  FrameTensor(int dim, int rank, bool antisymmetric = false)
      : dim_(dim), rank_(rank), antisymmetric_(antisymmetric) {
    if (dim < 1 || dim > kMaxDim) throw InputError("frame dimension out of range: " + std::to_string(dim));
    if (rank < 0) throw InputError("negative tensor rank");
    if (antisymmetric && rank > dim) {
      data_.clear();
      return;
    }
    std::size_t n = 1;
    for (int r = 0; r < rank; ++r) n *= static_cast<std::size_t>(dim);
    data_.assign(n, 0.0);
  }

  static FrameTensor form(int dim, int degree) { return FrameTensor(dim, degree, true); }

  static FrameTensor scalar(int dim, double value) {
    FrameTensor t = form(dim, 0);
    t.data_[0] = value;
    return t;
  }

  /// The basis covector e^i (equivalently the frame vector e_i).
  static FrameTensor basis(int dim, int i) {
    FrameTensor t = form(dim, 1);
    t.data_.at(static_cast<std::size_t>(i)) = 1.0;
    return t;
  }

  static FrameTensor vector(std::span<const double> v) {
    FrameTensor t = form(static_cast<int>(v.size()), 1);
    std::copy(v.begin(), v.end(), t.data_.begin());
    return t;
  }

  /// Identity (the frame metric) as a rank-2 tensor.
  static FrameTensor metric(int dim) {
    FrameTensor t(dim, 2);
    for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
    return t;
  }

  /// Decomposable form e^{i1}^...^e^{ip}.
  static FrameTensor elementary(int dim, std::initializer_list<int> idx) {
    FrameTensor t = form(dim, static_cast<int>(idx.size()));
    std::vector<int> v(idx);
    t.add_form_component(v, 1.0);
    return t;
  }

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  int degree() const { return rank_; }
  bool antisymmetric() const { return antisymmetric_; }
  void set_antisymmetric(bool a) { antisymmetric_ = a; }
  std::size_t size() const { return data_.size(); }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::size_t offset(std::span<const int> idx) const {
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    return off;
  }

  /// True for a form whose degree exceeds the dimension; it has no stored components.
  bool is_trivially_zero() const { return data_.empty(); }

  double& operator()(std::span<const int> idx) {
    if (data_.empty()) throw InputError("cannot write to a form of degree above the dimension");
    return data_[offset(idx)];
  }
  double operator()(std::span<const int> idx) const { return data_.empty() ? 0.0 : data_[offset(idx)]; }

  template <class... I>
    requires(std::is_integral_v<I> && ...)
  double& operator()(I... idx) {
    std::array<int, sizeof...(I)> a{static_cast<int>(idx)...};
    return (*this)(std::span<const int>(a));
  }
  template <class... I>
    requires(std::is_integral_v<I> && ...)
  double operator()(I... idx) const {
    std::array<int, sizeof...(I)> a{static_cast<int>(idx)...};
    return (*this)(std::span<const int>(a));
  }

  /// Multi-index for a flat offset.
  void unflatten(std::size_t off, std::span<int> idx) const {
    for (int r = rank_ - 1; r >= 0; --r) {
      idx[static_cast<std::size_t>(r)] = static_cast<int>(off % static_cast<std::size_t>(dim_));
      off /= static_cast<std::size_t>(dim_);
    }
  }

  /// Adds v to the component at `idx` and to every permutation with its sign.
  void add_form_component(std::span<const int> idx, double v) {
    std::vector<int> sorted(idx.begin(), idx.end());
    const int s = detail::sort_sign(sorted);
    if (s == 0 || data_.empty()) return;
    for (const auto& p : detail::all_permutations(rank_)) {
      std::vector<int> q(static_cast<std::size_t>(rank_));
      for (int k = 0; k < rank_; ++k) q[static_cast<std::size_t>(k)] = sorted[static_cast<std::size_t>(p[static_cast<std::size_t>(k)])];
      (*this)(q) += s * detail::permutation_sign(p) * v;
    }
  }

  double sup_norm() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  bool finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
  }

  FrameTensor& operator+=(const FrameTensor& o) {
    check_same_shape(o);
    if (o.data_.empty()) return *this;
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    antisymmetric_ = antisymmetric_ && o.antisymmetric_;
    return *this;
  }
  FrameTensor& operator-=(const FrameTensor& o) {
    check_same_shape(o);
    if (o.data_.empty()) return *this;
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    antisymmetric_ = antisymmetric_ && o.antisymmetric_;
    return *this;
  }
  FrameTensor& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend FrameTensor operator+(FrameTensor a, const FrameTensor& b) { return a += b; }
  friend FrameTensor operator-(FrameTensor a, const FrameTensor& b) { return a -= b; }
  friend FrameTensor operator*(double s, FrameTensor a) { return a *= s; }
  friend FrameTensor operator*(FrameTensor a, double s) { return a *= s; }
  friend FrameTensor operator-(FrameTensor a) { return a *= -1.0; }

  /// Largest deviation from total antisymmetry (all transpositions for rank <= 4, adjacent ones above).
  double antisymmetry_defect() const {
    double worst = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(rank_)), sw(idx.size());
    for (std::size_t off = 0; off < data_.size(); ++off) {
      unflatten(off, idx);
      for (int a = 0; a < rank_; ++a) {
        const int bmax = rank_ <= 4 ? rank_ : std::min(rank_, a + 2);
        for (int b = a + 1; b < bmax; ++b) {
          sw = idx;
          std::swap(sw[static_cast<std::size_t>(a)], sw[static_cast<std::size_t>(b)]);
          worst = std::max(worst, std::abs(data_[off] + (*this)(sw)));
        }
      }
    }
    return worst;
  }

  void check_same_shape(const FrameTensor& o) const {
    if (dim_ != o.dim_ || rank_ != o.rank_) throw InputError("tensor shape mismatch");
    if (data_.empty() && !o.data_.empty()) throw InputError("cannot accumulate into a form of degree above the dimension");
  }

 private:
  int dim_ = 1;
  int rank_ = 0;
  bool antisymmetric_ = true;
  std::vector<double> data_{0.0};
};

/// Orientation of the frame: epsilon_{0..n-1} = sign.
struct EpsilonOrientation {
  int dim = 1;
  int sign = 1;

  EpsilonOrientation() = default;
  EpsilonOrientation(int d, int s) : dim(d), sign(s) {
    if (s != 1 && s != -1) throw InputError("orientation sign must be +1 or -1");
    if (d < 1 || d > kMaxDim) throw InputError("orientation dimension out of range");
  }

  EpsilonOrientation flipped() const { return {dim, -sign}; }

  /// epsilon_{idx}; zero on repeated indices.
  double epsilon(std::span<const int> idx) const {
    std::vector<int> v(idx.begin(), idx.end());
    return sign * detail::sort_sign(v);
  }

  /// Volume form e^1^...^e^n scaled by sign.
  FrameTensor volume() const {
    FrameTensor v = FrameTensor::form(dim, dim);
    std::vector<int> idx(static_cast<std::size_t>(dim));
    std::iota(idx.begin(), idx.end(), 0);
    v.add_form_component(idx, sign);
    return v;
  }
};

/// Total antisymmetrization over the listed slots, with weight 1/k!.
inline FrameTensor antisymmetrize(const FrameTensor& t, std::span<const int> slots) {
  FrameTensor out(t.dim(), t.rank());
  const std::size_t k = slots.size();
  const auto perms = detail::all_permutations(static_cast<int>(k));
  std::vector<double> signs;
  signs.reserve(perms.size());
  for (const auto& p : perms) signs.push_back(detail::permutation_sign(p));
  std::vector<std::size_t> stride(static_cast<std::size_t>(t.rank()));
  for (int r = t.rank() - 1, s = 1; r >= 0; --r, s *= t.dim()) stride[static_cast<std::size_t>(r)] = static_cast<std::size_t>(s);
  const double w = 1.0 / static_cast<double>(detail::factorial(static_cast<int>(k)));
  std::vector<int> idx(static_cast<std::size_t>(t.rank()));
  for (std::size_t off = 0; off < t.size(); ++off) {
    t.unflatten(off, idx);
    std::size_t base = off;
    for (int sl : slots) base -= static_cast<std::size_t>(idx[static_cast<std::size_t>(sl)]) * stride[static_cast<std::size_t>(sl)];
    double acc = 0.0;
    for (std::size_t q = 0; q < perms.size(); ++q) {
      std::size_t src = base;
      for (std::size_t m = 0; m < k; ++m)
        src += static_cast<std::size_t>(idx[static_cast<std::size_t>(slots[static_cast<std::size_t>(perms[q][m])])]) *
               stride[static_cast<std::size_t>(slots[m])];
      acc += signs[q] * t.data()[src];
    }
    out.data()[off] = w * acc;
  }
  if (static_cast<int>(k) == t.rank()) out.set_antisymmetric(true);
  return out;
}

inline FrameTensor antisymmetrize(const FrameTensor& t, std::initializer_list<int> slots) {
  std::vector<int> s(slots);
  return antisymmetrize(t, std::span<const int>(s));
}

/// Reorders slots: the index in result slot k is placed in slot perm[k] of t.
inline FrameTensor permute_slots(const FrameTensor& t, std::span<const int> perm) {
  FrameTensor out(t.dim(), t.rank(), t.antisymmetric());
  std::vector<int> idx(static_cast<std::size_t>(t.rank())), src(idx.size());
  for (std::size_t off = 0; off < out.size(); ++off) {
    out.unflatten(off, idx);
    for (std::size_t k = 0; k < idx.size(); ++k) src[static_cast<std::size_t>(perm[k])] = idx[k];
    out.data()[off] = t(src);
  }
  return out;
}

inline FrameTensor permute_slots(const FrameTensor& t, std::initializer_list<int> perm) {
  std::vector<int> p(perm);
  return permute_slots(t, std::span<const int>(p));
}

namespace detail {

inline void require_form(const FrameTensor& t, const char* what) {
  if (!t.antisymmetric()) throw InputError(std::string(what) + ": argument is not flagged antisymmetric");
}

/// Writes the value given on increasing index sets to all permutations.
inline void fill_from_increasing(FrameTensor& out, const std::vector<int>& sorted, double v) {
  if (v == 0.0) return;
  out.add_form_component(sorted, v);
}

}  // namespace detail

/// Exterior product; components (chi^psi)_K = sum over shuffles of K of sign * chi_A psi_B.
inline FrameTensor wedge(const FrameTensor& chi, const FrameTensor& psi) {
  detail::require_form(chi, "wedge");
  detail::require_form(psi, "wedge");
  if (chi.dim() != psi.dim()) throw InputError("wedge: dimension mismatch");
  const int n = chi.dim(), p = chi.degree(), q = psi.degree();
  if (p + q > n) return FrameTensor::form(n, p + q);
  FrameTensor out = FrameTensor::form(n, p + q);
  const auto positions = detail::increasing_subsets(p + q, p);
  std::vector<int> a(static_cast<std::size_t>(p)), b(static_cast<std::size_t>(q)), perm(static_cast<std::size_t>(p + q));
  for (const auto& k : detail::increasing_subsets(n, p + q)) {
    double acc = 0.0;
    for (const auto& pos : positions) {
      int ia = 0, ib = 0;
      for (int s = 0; s < p + q; ++s) {
        if (ia < p && pos[static_cast<std::size_t>(ia)] == s) {
          a[static_cast<std::size_t>(ia)] = k[static_cast<std::size_t>(s)];
          perm[static_cast<std::size_t>(ia)] = s;
          ++ia;
        } else {
          b[static_cast<std::size_t>(ib)] = k[static_cast<std::size_t>(s)];
          perm[static_cast<std::size_t>(p + ib)] = s;
          ++ib;
        }
      }
      const double ca = chi(a), cb = psi(b);
      if (ca != 0.0 && cb != 0.0) acc += detail::permutation_sign(perm) * ca * cb;
    }
    detail::fill_from_increasing(out, k, acc);
  }
  return out;
}

/// Coefficient of chi^psi on the oriented volume when deg chi + deg psi = dim; avoids building the top form.
inline double wedge_volume_coefficient(const FrameTensor& chi, const FrameTensor& psi, const EpsilonOrientation& orient) {
  detail::require_form(chi, "wedge_volume_coefficient");
  detail::require_form(psi, "wedge_volume_coefficient");
  const int n = chi.dim(), p = chi.degree(), q = psi.degree();
  if (psi.dim() != n || orient.dim != n) throw InputError("wedge_volume_coefficient: dimension mismatch");
  if (p + q != n) throw InputError("wedge_volume_coefficient: degrees must add up to the dimension");
  double acc = 0.0;
  std::vector<int> full(static_cast<std::size_t>(n)), b;
  for (const auto& a : detail::increasing_subsets(n, p)) {
    const double ca = chi(a);
    if (ca == 0.0) continue;
    b.clear();
    for (int i = 0, k = 0; i < n; ++i) {
      if (k < p && a[static_cast<std::size_t>(k)] == i) {
        ++k;
      } else {
        b.push_back(i);
      }
    }
    std::copy(a.begin(), a.end(), full.begin());
    std::copy(b.begin(), b.end(), full.begin() + p);
    acc += orient.epsilon(full) * ca * psi(b);
  }
  return acc;
}

/// (iota_v chi)_{i2..ip} = v^j chi_{j i2..ip}.
inline FrameTensor interior_product(const FrameTensor& v, const FrameTensor& chi) {
  if (v.rank() != 1) throw InputError("interior_product: first argument must be a vector");
  if (chi.rank() < 1) throw InputError("interior_product: cannot contract a 0-form");
  if (v.dim() != chi.dim()) throw InputError("interior_product: dimension mismatch");
  FrameTensor out(chi.dim(), chi.rank() - 1, chi.antisymmetric());
  if (chi.is_trivially_zero() || out.is_trivially_zero()) return out;
  const std::size_t stride = out.size();
  for (int j = 0; j < chi.dim(); ++j) {
    const double vj = v(j);
    if (vj == 0.0) continue;
    for (std::size_t off = 0; off < stride; ++off)
      out.data()[off] += vj * chi.data()[static_cast<std::size_t>(j) * stride + off];
  }
  return out;
}

/// (chi, psi) = (1/p!) chi_{i1..ip} psi_{i1..ip}.
inline double form_inner(const FrameTensor& chi, const FrameTensor& psi) {
  if (chi.rank() != psi.rank() || chi.dim() != psi.dim()) throw InputError("form_inner: rank or dimension mismatch");
  detail::require_form(chi, "form_inner");
  detail::require_form(psi, "form_inner");
  double acc = 0.0;
  for (std::size_t i = 0; i < chi.size(); ++i) acc += chi.data()[i] * psi.data()[i];
  return acc / static_cast<double>(detail::factorial(chi.rank()));
}

/// (*chi)_{J} = (1/p!) chi_{I} eps_{I J}.
inline FrameTensor hodge_star(const FrameTensor& chi, const EpsilonOrientation& orient) {
  detail::require_form(chi, "hodge_star");
  if (orient.dim != chi.dim()) throw InputError("hodge_star: orientation dimension mismatch");
  const int n = chi.dim(), p = chi.degree();
  if (p > n) throw InputError("hodge_star: degree exceeds dimension");
  FrameTensor out = FrameTensor::form(n, n - p);
  std::vector<int> full(static_cast<std::size_t>(n)), comp;
  for (const auto& s : detail::increasing_subsets(n, p)) {
    const double v = chi(s);
    if (v == 0.0) continue;
    comp.clear();
    for (int i = 0, k = 0; i < n; ++i) {
      if (k < p && s[static_cast<std::size_t>(k)] == i) {
        ++k;
      } else {
        comp.push_back(i);
      }
    }
    std::copy(s.begin(), s.end(), full.begin());
    std::copy(comp.begin(), comp.end(), full.begin() + p);
    detail::fill_from_increasing(out, comp, orient.epsilon(full) * v);
  }
  return out;
}

/// Top-degree coefficient of an n-form relative to the oriented volume.
inline double volume_coefficient(const FrameTensor& top, const EpsilonOrientation& orient) {
  if (top.degree() != top.dim()) return 0.0;
  std::vector<int> idx(static_cast<std::size_t>(top.dim()));
  std::iota(idx.begin(), idx.end(), 0);
  return orient.sign * top(idx);
}

}  // namespace tg
