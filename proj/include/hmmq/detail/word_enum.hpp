#pragma once

#include <vector>

namespace hmmq {

namespace detail {

template <typename Visit>
void word_dfs(const Generator& gen, const Eigen::VectorXd& mass, int depth,
              int length, Word& prefix, Visit& visit) {
  if (depth == length) {
    visit(static_cast<const Word&>(prefix), mass.sum());
    return;
  }
  for (int x = 0; x < gen.num_symbols(); ++x) {
    Eigen::VectorXd next = gen.transition(x) * mass;
    prefix.symbols.push_back(x);
    word_dfs(gen, next, depth + 1, length, prefix, visit);
    prefix.symbols.pop_back();
  }
}

}  // namespace detail

template <typename Visit>
void for_each_word(const Generator& gen, int length, Visit&& visit) {
  Word prefix;
  prefix.symbols.reserve(static_cast<std::size_t>(length));
  detail::word_dfs(gen, gen.stationary(), 0, length, prefix, visit);
}

}  // namespace hmmq
