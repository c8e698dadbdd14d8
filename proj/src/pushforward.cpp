#include "sigcert/pushforward.hpp"

#include <mutex>

#include "sigcert/errors.hpp"

namespace sigcert {

GraphMapSpec GraphMapSpec::make(MultiPoly g, std::vector<Rational> anchor) {
  if (g.num_vars() != anchor.size())
    throw UsageError("graph map: polynomial has " + std::to_string(g.num_vars()) +
                     " variables but the anchor has " + std::to_string(anchor.size()) +
                     " coordinates");
  GraphMapSpec s;
  s.d = g.num_vars();
  s.g = std::move(g);
  s.anchor = std::move(anchor);
  return s;
}

GraphMapSpec GraphMapSpec::make(MultiPoly g) {
  std::vector<Rational> zero(g.num_vars(), Rational(0));
  return make(std::move(g), std::move(zero));
}

std::vector<MultiPoly> jacobian_row(const GraphMapSpec& spec, std::size_t i) {
  if (i < 1 || i > spec.d + 1)
    throw UsageError("Jacobian row " + std::to_string(i) + " out of range 1.." +
                     std::to_string(spec.d + 1));
  std::vector<MultiPoly> row;
  row.reserve(spec.d);
  if (i <= spec.d) {
    for (std::size_t j = 1; j <= spec.d; ++j)
      row.push_back(MultiPoly::constant(spec.d, Rational(i == j ? 1 : 0)));
    return row;
  }
  const MultiPoly shifted = shift(spec.g, spec.anchor);
  for (std::size_t j = 1; j <= spec.d; ++j) row.push_back(partial(shifted, j));
  return row;
}

PushForward::PushForward(GraphMapSpec spec) : spec_(std::move(spec)) {
  const int d = static_cast<int>(spec_.d);
  for (const MultiPoly& p : jacobian_row(spec_, spec_.d + 1)) {
    TensorElem e = phi(p);
    gradient_words_.push_back(e.is_zero() ? TensorElem(d) : e);
  }
  cache_.emplace(std::vector<Letter>{}, TensorElem::unit(d));
}

std::size_t PushForward::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

TensorElem PushForward::operator()(const Word& v) const {
  const int d = static_cast<int>(spec_.d);
  if (v.alphabet_size() != d + 1)
    throw UsageError("pushforward expects words over " + std::to_string(d + 1) +
                     " letters, got alphabet " + std::to_string(v.alphabet_size()));
  const auto& letters = v.letters();

  // longest cached prefix
  std::size_t known = 0;
  TensorElem acc(d);
  {
    std::shared_lock lock(mutex_);
    for (std::size_t len = letters.size() + 1; len-- > 0;) {
      auto it = cache_.find(std::vector<Letter>(letters.begin(), letters.begin() + len));
      if (it != cache_.end()) {
        known = len;
        acc = it->second;
        break;
      }
    }
  }

  std::vector<std::pair<std::vector<Letter>, TensorElem>> fresh;
  for (std::size_t k = known; k < letters.size(); ++k) {
    const Letter i = letters[k];
    if (i <= d) {
      acc = concat(acc, Word::letter(i, d));
    } else {
      TensorElem next(d);
      for (int j = 1; j <= d; ++j) {
        const TensorElem& gj = gradient_words_[j - 1];
        if (gj.is_zero()) continue;
        next += concat(shuffle(acc, gj), Word::letter(j, d));
      }
      acc = std::move(next);
    }
    fresh.emplace_back(std::vector<Letter>(letters.begin(), letters.begin() + k + 1), acc);
  }
  if (!fresh.empty()) {
    std::unique_lock lock(mutex_);
    for (auto& [key, value] : fresh) cache_.emplace(std::move(key), std::move(value));
  }
  return acc;
}

TensorElem PushForward::operator()(const TensorElem& v) const {
  TensorElem out(static_cast<int>(spec_.d));
  for (const auto& [w, c] : v.terms()) out += (*this)(w) * c;
  return out;
}

TensorElem m_push(const Word& v, const GraphMapSpec& spec) { return PushForward(spec)(v); }

TensorElem single_occurrence_reduce(const Word& v, const GraphMapSpec& spec) {
  const int d = static_cast<int>(spec.d);
  const Letter top = d + 1;
  if (v.alphabet_size() != d + 1)
    throw UsageError("reduction expects words over " + std::to_string(d + 1) + " letters");
  if (v.count(top) < 2)
    throw DomainError("word " + to_string(v) + " contains letter " + std::to_string(top) +
                      " fewer than twice");

  std::vector<TensorElem> grad;
  for (const MultiPoly& p : jacobian_row(spec, spec.d + 1))
    grad.push_back(phi(p).with_alphabet(d + 1));

  TensorElem done(d + 1);
  TensorElem pending(v);
  while (!pending.is_zero()) {
    TensorElem next(d + 1);
    for (const auto& [w, c] : pending.terms()) {
      if (w.count(top) <= 1) {
        done.add_term(w, c);
        continue;
      }
      std::size_t last = w.size();
      while (w[--last] != top) {
      }
      const Word u = w.slice(0, last);
      const Word q = w.slice(last + 1, w.size());
      for (int j = 1; j <= d; ++j) {
        if (grad[j - 1].is_zero()) continue;
        TensorElem s = shuffle(TensorElem(u), grad[j - 1]);
        next += concat(concat(s, Word::letter(j, d + 1)), q) * c;
      }
    }
    pending = std::move(next);
  }
  return done;
}

}  // namespace sigcert
