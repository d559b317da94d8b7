#include "g2kit/forms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace g2kit {

namespace {

// Sign of the permutation that sorts the concatenation (I, J) for disjoint
// index sets: (-1)^{#pairs i in I, j in J with i > j}.
int merge_sign(std::uint8_t a, std::uint8_t b) {
  int inversions = 0;
  for (int j = 0; j < kDim; ++j) {
    if ((b >> j) & 1u) {
      inversions += std::popcount(static_cast<unsigned>(a >> (j + 1)));
    }
  }
  return (inversions & 1) ? -1 : 1;
}

constexpr std::uint8_t kFullMask = 0x7f;

template <typename Matrix>
KForm theta_impl(const Matrix& d, const KForm& a, int offset, int n) {
  KForm out(a.degree());
  for (const auto& [idx, c] : a.terms()) {
    const std::uint8_t mask = idx.mask();
    for (int bit = 0; bit < kDim; ++bit) {
      if (!((mask >> bit) & 1u)) continue;
      const int row = bit - offset;
      if (row < 0 || row >= n) continue;
      const std::uint8_t rest = mask & ~(1u << bit);
      for (int col = 0; col < n; ++col) {
        const double entry = d(row, col);
        if (entry == 0.0) continue;
        const int target = col + offset;
        if ((rest >> target) & 1u) continue;
        // Replace e^{bit} in place by -D(row,col) e^{target}: move the factor
        // to the front, swap it, and move it back.
        const int s_out = (std::popcount(static_cast<unsigned>(mask & ((1u << bit) - 1))) & 1) ? -1 : 1;
        const int s_in = (std::popcount(static_cast<unsigned>(rest & ((1u << target) - 1))) & 1) ? -1 : 1;
        const auto new_mask = static_cast<std::uint8_t>(rest | (1u << target));
        out.add_term(MultiIndex::from_mask(new_mask), -entry * c * s_out * s_in);
      }
    }
  }
  return out;
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<int> indices)
    : MultiIndex(from_indices(std::vector<int>(indices))) {}

MultiIndex MultiIndex::from_mask(std::uint8_t mask) {
  if (mask & ~kFullMask) throw std::invalid_argument("multi-index mask out of range");
  MultiIndex m;
  m.mask_ = mask;
  return m;
}

MultiIndex MultiIndex::from_indices(const std::vector<int>& indices) {
  std::uint8_t mask = 0;
  int prev = 0;
  for (int i : indices) {
    if (i < 1 || i > kDim) throw std::invalid_argument("multi-index entry outside 1..7");
    if (i <= prev) throw std::invalid_argument("multi-index must be strictly increasing");
    mask |= static_cast<std::uint8_t>(1u << (i - 1));
    prev = i;
  }
  return from_mask(mask);
}

int MultiIndex::degree() const { return std::popcount(static_cast<unsigned>(mask_)); }

std::vector<int> MultiIndex::indices() const {
  std::vector<int> out;
  for (int i = 1; i <= kDim; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::string MultiIndex::to_string() const {
  std::string s;
  for (int i : indices()) s += static_cast<char>('0' + i);
  return s;
}

std::strong_ordering operator<=>(MultiIndex a, MultiIndex b) {
  if (a.mask_ == b.mask_) return std::strong_ordering::equal;
  const unsigned diff = a.mask_ ^ b.mask_;
  const int low = std::countr_zero(diff);
  const unsigned above = ~((2u << low) - 1);
  // Both share every index below `low`. The side holding `low` is smaller
  // unless the other side has nothing left (it is then a proper prefix).
  if ((a.mask_ >> low) & 1u) {
    return (b.mask_ & above) ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return (a.mask_ & above) ? std::strong_ordering::greater : std::strong_ordering::less;
}

KForm::KForm(int degree) : degree_(degree) {
  if (degree < 0 || degree > kDim) throw std::invalid_argument("form degree outside 0..7");
}

KForm KForm::monomial(MultiIndex idx, double coeff) {
  KForm f(idx.degree());
  f.add_term(idx, coeff);
  return f;
}

KForm KForm::basis(std::initializer_list<int> idx, double coeff) {
  return monomial(MultiIndex(idx), coeff);
}

KForm KForm::scalar(double value) { return monomial(MultiIndex{}, value); }

double KForm::coeff(MultiIndex idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? 0.0 : it->second;
}

void KForm::add_term(MultiIndex idx, double c) {
  if (idx.degree() != degree_) throw std::invalid_argument("monomial degree does not match form degree");
  auto [it, inserted] = terms_.try_emplace(idx, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kPruneThreshold) terms_.erase(it);
}

double KForm::norm() const {
  double s = 0.0;
  for (const auto& [idx, c] : terms_) s += c * c;
  return std::sqrt(s);
}

KForm& KForm::operator+=(const KForm& other) {
  if (other.is_zero()) return *this;
  if (other.degree_ != degree_) {
    if (!is_zero()) throw std::invalid_argument("cannot add forms of different degree");
    degree_ = other.degree_;
  }
  for (const auto& [idx, c] : other.terms_) add_term(idx, c);
  return *this;
}

KForm& KForm::operator-=(const KForm& other) {
  if (other.is_zero()) return *this;
  if (other.degree_ != degree_) {
    if (!is_zero()) throw std::invalid_argument("cannot subtract forms of different degree");
    degree_ = other.degree_;
  }
  for (const auto& [idx, c] : other.terms_) add_term(idx, -c);
  return *this;
}

KForm& KForm::operator*=(double s) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    if (std::abs(it->second) < kPruneThreshold) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

KForm wedge(const KForm& a, const KForm& b) {
  const int deg = a.degree() + b.degree();
  if (deg > kDim) return KForm(kDim);
  KForm out(deg);
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      if (ia.mask() & ib.mask()) continue;
      const int s = merge_sign(ia.mask(), ib.mask());
      out.add_term(MultiIndex::from_mask(ia.mask() | ib.mask()), s * ca * cb);
    }
  }
  return out;
}

KForm hodge(const KForm& a) {
  KForm out(kDim - a.degree());
  for (const auto& [idx, c] : a.terms()) {
    const auto comp = static_cast<std::uint8_t>(kFullMask & ~idx.mask());
    out.add_term(MultiIndex::from_mask(comp), merge_sign(idx.mask(), comp) * c);
  }
  return out;
}

KForm interior(int v, const KForm& a) {
  if (v < 1 || v > kDim) throw std::invalid_argument("basis vector index outside 1..7");
  if (a.degree() == 0) return KForm(0);
  KForm out(a.degree() - 1);
  const unsigned bit = 1u << (v - 1);
  for (const auto& [idx, c] : a.terms()) {
    if (!(idx.mask() & bit)) continue;
    const int before = std::popcount(static_cast<unsigned>(idx.mask() & (bit - 1)));
    out.add_term(MultiIndex::from_mask(static_cast<std::uint8_t>(idx.mask() & ~bit)),
                 (before & 1) ? -c : c);
  }
  return out;
}

double inner(const KForm& a, const KForm& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("inner product of forms with different degree");
  double s = 0.0;
  for (const auto& [idx, c] : a.terms()) s += c * b.coeff(idx);
  return s;
}

KForm theta(const Mat4& d, const KForm& a) { return theta_impl(d, a, 2, 4); }

KForm theta(const Mat7& d, const KForm& a) { return theta_impl(d, a, 0, 7); }

double max_abs_diff(const KForm& a, const KForm& b) {
  if (a.degree() != b.degree() && !a.is_zero() && !b.is_zero()) {
    throw std::invalid_argument("comparing forms of different degree");
  }
  double m = 0.0;
  for (const auto& [idx, c] : a.terms()) m = std::max(m, std::abs(c - b.coeff(idx)));
  for (const auto& [idx, c] : b.terms()) {
    if (!a.terms().contains(idx)) m = std::max(m, std::abs(c));
  }
  return m;
}

std::string to_string(const KForm& a, int precision) {
  if (a.is_zero()) return "0";
  std::string out;
  char buf[64];
  for (const auto& [idx, c] : a.terms()) {
    if (!out.empty()) out += ' ';
    std::snprintf(buf, sizeof buf, "%+.*f", precision, c);
    out += buf;
    if (idx.degree() > 0) out += " e^{" + idx.to_string() + "}";
  }
  return out;
}

namespace std_forms {

KForm vol() { return KForm::basis({1, 2, 3, 4, 5, 6, 7}); }

KForm phi() {
  KForm f(3);
  f.add_term({1, 2, 7}, 1);
  f.add_term({3, 4, 7}, 1);
  f.add_term({5, 6, 7}, 1);
  f.add_term({1, 3, 5}, 1);
  f.add_term({1, 4, 6}, -1);
  f.add_term({2, 3, 6}, -1);
  f.add_term({2, 4, 5}, -1);
  return f;
}

KForm psi() { return hodge(phi()); }

KForm omega7() { return KForm::basis({3, 4}) + KForm::basis({5, 6}); }
KForm omega1() { return KForm::basis({3, 5}) - KForm::basis({4, 6}); }
KForm omega2() { return -KForm::basis({3, 6}) - KForm::basis({4, 5}); }

KForm omegabar7() { return KForm::basis({3, 4}) - KForm::basis({5, 6}); }
KForm omegabar1() { return KForm::basis({3, 5}) + KForm::basis({4, 6}); }
KForm omegabar2() { return -KForm::basis({3, 6}) + KForm::basis({4, 5}); }

}  // namespace std_forms

}  // namespace g2kit
