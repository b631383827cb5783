#include "ccn/genericity.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace ccn {

std::vector<int> isotypic_nilpotent_codims(int index, int s) {
  if (s < 1) throw std::invalid_argument("multiplicity must be at least 1");
  std::set<int> out;
  switch (index) {
    case 1:
      out.insert(s);
      for (int i = 2; i <= s; ++i) out.insert(i * i);
      break;
    case 2:
    case 4:
      for (int i = 1; i <= s; ++i) out.insert(i * i * index);
      break;
    default:
      throw std::invalid_argument("index must be 1, 2 or 4, got " + std::to_string(index));
  }
  return {out.begin(), out.end()};
}

std::vector<int> stratum_codims(const std::vector<std::pair<int, int>>& choice) {
  std::set<int> sums{0};
  for (const auto& [index, s] : choice) {
    const auto options = isotypic_nilpotent_codims(index, s);
    std::set<int> next;
    for (int a : sums)
      for (int d : options) next.insert(a + d);
    sums.swap(next);
  }
  return {sums.begin(), sums.end()};
}

StrataEnumeration enumerate_strata(const Decomposition& dec, std::size_t cap) {
  StrataEnumeration out;
  out.cap = cap;
  const auto k = dec.classes.size();
  std::vector<int> s(k, 0);
  for (;;) {
    if (out.strata.size() >= cap) {
      out.truncated = true;
      break;
    }
    Stratum st;
    std::vector<std::pair<int, int>> choice;
    for (std::size_t r = 0; r < k; ++r) {
      if (s[r] == 0) continue;
      const auto& cls = dec.classes[r];
      st.kernel_isotype.emplace_back(static_cast<int>(r), s[r]);
      st.kernel_dim += s[r] * cls.dim;
      choice.emplace_back(cls.index, s[r]);
    }
    st.codim_options = stratum_codims(choice);
    st.min_codim = st.codim_options.front();
    st.generic = st.min_codim == 1;
    out.strata.push_back(std::move(st));

    // lexicographic increment, last class fastest
    std::size_t r = k;
    while (r > 0) {
      --r;
      if (s[r] < dec.classes[r].multiplicity()) {
        ++s[r];
        std::fill(s.begin() + static_cast<std::ptrdiff_t>(r) + 1, s.end(), 0);
        break;
      }
      if (r == 0) {
        r = k + 1;  // exhausted
        break;
      }
    }
    if (k == 0 || r == k + 1) break;
  }
  std::stable_sort(out.strata.begin(), out.strata.end(), [](const Stratum& a, const Stratum& b) {
    if (a.min_codim != b.min_codim) return a.min_codim < b.min_codim;
    return a.kernel_dim < b.kernel_dim;
  });
  return out;
}

Prediction predict_generic_bifurcations(const Decomposition& dec) {
  Prediction p;
  const auto all = enumerate_strata(dec);
  for (const auto& st : all.strata) {
    if (st.kernel_isotype.empty()) continue;
    if (st.generic) {
      p.generic.push_back(st);
    } else if (p.min_nongeneric_codim == 0 || st.min_codim < p.min_nongeneric_codim) {
      p.min_nongeneric_codim = st.min_codim;
    }
  }
  std::stable_sort(p.generic.begin(), p.generic.end(), [](const Stratum& a, const Stratum& b) {
    return a.kernel_isotype.front().first < b.kernel_isotype.front().first;
  });
  return p;
}

}  // namespace ccn
