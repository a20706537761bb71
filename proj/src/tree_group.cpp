#include "sosgibbs/tree_group.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <string>

namespace sosgibbs {

namespace {

void check_letter(int letter, int k) {
  if (letter < 1 || letter > k + 1)
    throw std::out_of_range("generator index " + std::to_string(letter) + " outside {1.." +
                            std::to_string(k + 1) + "}");
}

}  // namespace

Word Word::reduce(std::span<const int> letters, int k) {
  std::vector<int> stack;
  stack.reserve(letters.size());
  for (int a : letters) {
    check_letter(a, k);
    if (!stack.empty() && stack.back() == a)
      stack.pop_back();
    else
      stack.push_back(a);
  }
  return Word(std::move(stack));
}

Word Word::parse(std::string_view text, int k) {
  if (text == "e") return Word();
  std::vector<int> letters;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dot = std::min(text.find('.', pos), text.size());
    int value = 0;
    const auto token = text.substr(pos, dot - pos);
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
      throw std::invalid_argument("malformed word '" + std::string(text) + "'");
    letters.push_back(value);
    pos = dot + 1;
  }
  Word w = reduce(letters, k);
  if (w.length() != letters.size())
    throw std::invalid_argument("word '" + std::string(text) + "' is not reduced");
  return w;
}

Word Word::times(int generator) const {
  std::vector<int> letters = letters_;
  if (!letters.empty() && letters.back() == generator)
    letters.pop_back();
  else
    letters.push_back(generator);
  return Word(std::move(letters));
}

Word Word::inverse() const {
  // Every generator is an involution.
  return Word(std::vector<int>(letters_.rbegin(), letters_.rend()));
}

std::string Word::to_string() const {
  if (letters_.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(letters_[i]);
  }
  return out;
}

Word operator*(const Word& lhs, const Word& rhs) {
  std::vector<int> letters = lhs.letters_;
  for (int a : rhs.letters_) {
    if (!letters.empty() && letters.back() == a)
      letters.pop_back();
    else
      letters.push_back(a);
  }
  return Word(std::move(letters));
}

std::vector<Word> sphere(int n, int k) {
  if (n < 0) throw std::invalid_argument("sphere radius must be >= 0");
  std::vector<Word> current{Word()};
  for (int l = 0; l < n; ++l) {
    std::vector<Word> next;
    next.reserve(current.size() * static_cast<std::size_t>(k + 1));
    for (const Word& w : current)
      for (Word& y : direct_successors(w, k)) next.push_back(std::move(y));
    current = std::move(next);
  }
  return current;
}

std::vector<Word> direct_successors(const Word& x, int k) {
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(k + 1));
  for (int a = 1; a <= k + 1; ++a)
    if (a != x.last()) out.push_back(x.times(a));
  return out;
}

std::vector<Word> path_vertices(std::span<const int> digits, int k) {
  std::vector<Word> path{Word()};
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const int limit = i == 0 ? k + 1 : k;
    if (digits[i] < 0 || digits[i] >= limit)
      throw std::out_of_range("path digit " + std::to_string(digits[i]) + " out of range at step " +
                              std::to_string(i));
    auto successors = direct_successors(path.back(), k);
    path.push_back(std::move(successors[static_cast<std::size_t>(digits[i])]));
  }
  return path;
}

SubgroupSpec::SubgroupSpec(int k, std::vector<int> parity_set) : k_(k), parity_set_(std::move(parity_set)) {
  std::sort(parity_set_.begin(), parity_set_.end());
  parity_set_.erase(std::unique(parity_set_.begin(), parity_set_.end()), parity_set_.end());
  if (parity_set_.empty()) throw std::invalid_argument("parity set must be nonempty (index-2 subgroup)");
  for (int a : parity_set_) check_letter(a, k);
}

SubgroupSpec SubgroupSpec::even_length(int k) {
  std::vector<int> all(static_cast<std::size_t>(k + 1));
  for (int a = 1; a <= k + 1; ++a) all[static_cast<std::size_t>(a - 1)] = a;
  return SubgroupSpec(k, std::move(all));
}

bool SubgroupSpec::in_parity_set(int generator) const {
  return std::binary_search(parity_set_.begin(), parity_set_.end(), generator);
}

int SubgroupSpec::coset(const Word& x) const {
  int count = 0;
  for (int a : x.letters()) count += in_parity_set(a) ? 1 : 0;
  return count % 2;
}

CosetProfile coset_profile(const Word& x, const SubgroupSpec& spec) {
  CosetProfile p;
  p.coset = spec.coset(x);
  // x * a_i flips the coset exactly when a_i is in the parity set.
  for (int a = 1; a <= spec.k() + 1; ++a) {
    const int c = spec.in_parity_set(a) ? 1 - p.coset : p.coset;
    ++p.q[static_cast<std::size_t>(c)];
  }
  return p;
}

std::vector<SubgroupSpec> proper_parity_subgroups(int k) {
  std::vector<SubgroupSpec> out;
  const unsigned full = (1u << (k + 1)) - 1u;
  for (unsigned mask = 1; mask < full; ++mask) {
    std::vector<int> set;
    for (int a = 1; a <= k + 1; ++a)
      if (mask & (1u << (a - 1))) set.push_back(a);
    out.emplace_back(k, std::move(set));
  }
  return out;
}

Ball::Ball(int k, int depth) : k_(k), depth_(depth) {
  if (k < 1) throw std::invalid_argument("tree order k must be >= 1");
  if (depth < 0) throw std::invalid_argument("ball depth must be >= 0");
  vertices_.push_back(Word());
  parent_.push_back(-1);
  digit_.push_back(0);
  level_begin_.push_back(0);
  for (int l = 0; l < depth; ++l) {
    const int begin = level_begin_.back();
    const int end = static_cast<int>(vertices_.size());
    level_begin_.push_back(end);
    for (int v = begin; v < end; ++v) {
      int d = 0;
      for (int a = 1; a <= k + 1; ++a) {
        if (a == vertices_[static_cast<std::size_t>(v)].last()) continue;
        vertices_.push_back(vertices_[static_cast<std::size_t>(v)].times(a));
        parent_.push_back(v);
        digit_.push_back(d++);
      }
    }
  }
  level_begin_.push_back(static_cast<int>(vertices_.size()));

  child_begin_.assign(vertices_.size(), -1);
  child_count_.assign(vertices_.size(), 0);
  for (int v = 1; v < size(); ++v) {
    const int p = parent_[static_cast<std::size_t>(v)];
    if (child_begin_[static_cast<std::size_t>(p)] < 0) child_begin_[static_cast<std::size_t>(p)] = v;
    ++child_count_[static_cast<std::size_t>(p)];
  }
  for (int v = 0; v < size(); ++v) index_.emplace(vertices_[static_cast<std::size_t>(v)], v);
}

std::vector<int> Ball::digits_to(int index) const {
  std::vector<int> digits(static_cast<std::size_t>(level(index)));
  for (int v = index; v > 0; v = parent(v)) digits[static_cast<std::size_t>(level(v) - 1)] = digit(v);
  return digits;
}

int Ball::index_of(const Word& w) const {
  const auto it = index_.find(w);
  return it == index_.end() ? -1 : it->second;
}

}  // namespace sosgibbs
