#pragma once

// Reduced-word enumeration over a symmetric generator set, shared by the
// limit-set and counting modules. Letters 0..k-1 are the generators,
// k..2k-1 their inverses; a word never contains a letter next to its
// inverse. Enumeration order is breadth-first, lexicographic in letters,
// so output is deterministic.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace projdyn {

using Word = std::vector<int>;

inline int inverse_letter(int letter, int num_gens) {
  return letter < num_gens ? letter + num_gens : letter - num_gens;
}

inline std::string word_name(const Word& w) {
  if (w.empty()) return "id";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s.push_back(' ');
    s += "g" + std::to_string(w[i] + 1);
  }
  return s;
}

// Letter names a..z for generators, A..Z for inverses (compact CSV form).
inline std::string word_letters(const Word& w, int num_gens) {
  if (w.empty()) return "1";
  std::string s;
  for (int l : w)
    s.push_back(l < num_gens ? static_cast<char>('a' + l) : static_cast<char>('A' + l - num_gens));
  return s;
}

inline int thread_count_from_env() {
  if (const char* env = std::getenv("PROJDYN_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

// Visits every reduced word of length 1..max_length once, with its group
// element computed incrementally: elements[letter] are the 2k letter
// elements, compose(a, b) multiplies, visit(word, element).
template <class Elem>
void for_each_reduced_word(const std::vector<Elem>& letters, int num_gens, int max_length,
                           const std::function<Elem(const Elem&, const Elem&)>& compose,
                           const std::function<void(const Word&, const Elem&)>& visit) {
  if (max_length <= 0) return;
  Word w;
  std::vector<Elem> stack;
  std::function<void()> rec = [&]() {
    int depth = static_cast<int>(w.size());
    if (depth == max_length) return;
    for (int l = 0; l < 2 * num_gens; ++l) {
      if (depth > 0 && l == inverse_letter(w.back(), num_gens)) continue;
      w.push_back(l);
      Elem e = depth == 0 ? letters[l] : compose(stack.back(), letters[l]);
      stack.push_back(e);
      visit(w, e);
      rec();
      stack.pop_back();
      w.pop_back();
    }
  };
  rec();
}

// Parallel variant sharded over the first letter; visits are delivered in
// the same deterministic order as the serial one by buffering per shard.
template <class Elem>
void for_each_reduced_word_sharded(
    const std::vector<Elem>& letters, int num_gens, int max_length,
    const std::function<Elem(const Elem&, const Elem&)>& compose,
    const std::function<void(const Word&, const Elem&)>& visit) {
  int threads = thread_count_from_env();
  if (threads <= 1) {
    for_each_reduced_word(letters, num_gens, max_length, compose, visit);
    return;
  }
  const int shards = 2 * num_gens;
  std::vector<std::vector<std::pair<Word, Elem>>> out(shards);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      int s = next.fetch_add(1);
      if (s >= shards) return;
      Word w{s};
      std::vector<Elem> stack{letters[s]};
      out[s].emplace_back(w, stack[0]);
      std::function<void()> rec = [&]() {
        int depth = static_cast<int>(w.size());
        if (depth == max_length) return;
        for (int l = 0; l < 2 * num_gens; ++l) {
          if (l == inverse_letter(w.back(), num_gens)) continue;
          w.push_back(l);
          Elem e = compose(stack.back(), letters[l]);
          stack.push_back(e);
          out[s].emplace_back(w, e);
          rec();
          stack.pop_back();
          w.pop_back();
        }
      };
      if (max_length >= 1) rec();
    }
  };
  for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  // Serial visiting order is breadth-last-depth-first by first letter; the
  // plain recursion emits shard s fully before shard s+1, so concatenation
  // in shard order reproduces it.
  for (int s = 0; s < shards; ++s)
    for (auto& [w, e] : out[s]) visit(w, e);
}

}  // namespace projdyn
