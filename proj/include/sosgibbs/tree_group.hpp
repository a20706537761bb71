#pragma once

#include <array>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sosgibbs {

// Reduced word over the involutive generators a_1..a_{k+1} of G_k.
// A word is simultaneously a group element and a vertex of the Cayley tree;
// the empty word is the identity and the tree origin.
class Word {
 public:
  Word() = default;

  // Cancels adjacent equal letters until the word is reduced.
  // Throws std::out_of_range for letters outside {1..k+1}.
  static Word reduce(std::span<const int> letters, int k);
  static Word parse(std::string_view text, int k);

  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  int last() const { return letters_.empty() ? 0 : letters_.back(); }

  // Extension by one generator; cancels when g equals the last letter.
  Word times(int generator) const;
  Word inverse() const;

  std::string to_string() const;

  friend Word operator*(const Word& lhs, const Word& rhs);
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    if (a.letters_.size() != b.letters_.size()) return a.letters_.size() <=> b.letters_.size();
    return a.letters_ <=> b.letters_;
  }

 private:
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}
  std::vector<int> letters_;
};

std::vector<Word> sphere(int n, int k);
std::vector<Word> direct_successors(const Word& x, int k);

// Vertices reached from the origin by picking, at each step, the digit-th
// direct successor in generator order. The first digit ranges over {0..k},
// later ones over {0..k-1}.
std::vector<Word> path_vertices(std::span<const int> digits, int k);

// Parity subgroup H_A: words with an even number of letters from A.
class SubgroupSpec {
 public:
  SubgroupSpec(int k, std::vector<int> parity_set);
  static SubgroupSpec even_length(int k);

  int k() const { return k_; }
  const std::vector<int>& parity_set() const { return parity_set_; }
  bool in_parity_set(int generator) const;
  bool is_full() const { return static_cast<int>(parity_set_.size()) == k_ + 1; }
  // I(H_A) = H_A intersected with the generators; nonempty iff A is proper.
  bool generators_intersect() const { return !is_full(); }
  int coset(const Word& x) const;

 private:
  int k_;
  std::vector<int> parity_set_;
};

struct CosetProfile {
  int coset = 0;
  // q[c] = number of the k+1 neighbours of x lying in coset c.
  std::array<int, 2> q{};
};

CosetProfile coset_profile(const Word& x, const SubgroupSpec& spec);

// Parity subgroups H_A for every nonempty A strictly inside {1..k+1}.
std::vector<SubgroupSpec> proper_parity_subgroups(int k);

// The ball V_n laid out breadth-first with successors in generator order.
// A ball of depth n is a prefix of every deeper ball.
class Ball {
 public:
  Ball(int k, int depth);

  int k() const { return k_; }
  int depth() const { return depth_; }
  int size() const { return static_cast<int>(vertices_.size()); }

  const Word& vertex(int index) const { return vertices_[index]; }
  const std::vector<Word>& vertices() const { return vertices_; }
  int parent(int index) const { return parent_[index]; }
  int level(int index) const { return static_cast<int>(vertices_[index].length()); }
  // Position of the vertex among its parent's direct successors.
  int digit(int index) const { return digit_[index]; }
  int child_begin(int index) const { return child_begin_[index]; }
  int child_count(int index) const { return child_count_[index]; }

  // [begin, end) of the sphere W_l inside the vertex array.
  int level_begin(int l) const { return level_begin_[l]; }
  int level_end(int l) const { return level_begin_[l + 1]; }

  // Digits from the origin to the vertex.
  std::vector<int> digits_to(int index) const;

  // -1 when the word is not in the ball.
  int index_of(const Word& w) const;

 private:
  int k_;
  int depth_;
  std::vector<Word> vertices_;
  std::vector<int> parent_;
  std::vector<int> digit_;
  std::vector<int> child_begin_;
  std::vector<int> child_count_;
  std::vector<int> level_begin_;
  std::map<Word, int> index_;
};

}  // namespace sosgibbs
