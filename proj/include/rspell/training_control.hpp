#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "rspell/error.hpp"
#include "rspell/retriever.hpp"
#include "rspell/sentence.hpp"
#include "rspell/speller.hpp"

namespace rspell {

inline constexpr double kGoldProbabilityFloor = 1e-9;

struct LossBreakdown {
  double loss_c = 0.0;
  double loss_r = 0.0;
  double total = 0.0;
  bool gate_open = false;
};

// Adaptive process control: retrieval knowledge counts only when some
// retrieved term occurs verbatim in the target sentence.
inline bool gate(const RetrievalResult& r, const TargetSentence& y) {
  return std::any_of(r.terms.begin(), r.terms.end(),
                     [&](const std::string& term) { return !term.empty() && y.text.find(term) != std::string::npos; });
}

// -sum_i ln p(y_i) with natural logs. Gold characters the matrix does not
// cover (or gives less than the floor) are charged at the floor probability.
inline double nll_loss(const TokenDistributionMatrix& m, const TargetSentence& y) {
  if (m.size() != y.size()) {
    throw ContractError("matrix has " + std::to_string(m.size()) + " positions, target has " +
                        std::to_string(y.size()));
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double lp = std::max(m.log_prob(i, y.chars[i]), std::log(kGoldProbabilityFloor));
    loss += std::max(0.0, -lp);
  }
  return loss;
}

// L = L_C + L_R, where L_R is charged only while the gate is open. Passing
// no augmented-branch matrix is an error once the gate opens.
inline LossBreakdown combined_loss(const TokenDistributionMatrix& m_c, const TokenDistributionMatrix* m_r,
                                   const RetrievalResult& r, const TargetSentence& y, bool use_gate = true) {
  LossBreakdown out;
  out.loss_c = nll_loss(m_c, y);
  out.gate_open = use_gate ? gate(r, y) : true;
  if (out.gate_open) {
    if (!m_r) throw ContractError("gate is open but no retrieval-augmented distribution was supplied");
    out.loss_r = nll_loss(*m_r, y);
  }
  out.total = out.loss_c + out.loss_r;
  return out;
}

}  // namespace rspell
