#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cotorsion/module.hpp"

namespace cotorsion {

/// Basis of the algebra made of words g_k ... g_1 e_b in the generators, plus
/// the relations g * w = sum c_j w_j. A module is then the same thing as a
/// tuple of generator matrices (between block components) satisfying the
/// relations.
struct Presentation {
  struct Word {
    std::size_t source_block = 0, target_block = 0;
    long parent = -1;  // word this one extends, -1 for an idempotent
    std::size_t generator = 0;
  };
  struct Relation {
    std::size_t generator = 0, word = 0;
    std::vector<std::pair<std::size_t, Residue>> rhs;
  };
  std::vector<Word> words;
  FieldMatrix words_to_basis;  // column j = coordinates of word j
  FieldMatrix basis_to_words;  // inverse
  std::vector<Relation> relations;
};

inline Presentation make_presentation(const Algebra& alg) {
  const Residue p = alg.p();
  const std::size_t n = alg.dim();
  Presentation pr;
  SpanBuilder span(p, n);
  std::vector<Vector> coords;
  for (std::size_t b = 0; b < alg.blocks().size(); ++b) {
    if (!span.add(alg.blocks()[b])) throw InternalInconsistency("block idempotents are dependent");
    pr.words.push_back({b, b, -1, 0});
    coords.push_back(alg.blocks()[b]);
  }
  for (std::size_t w = 0; w < pr.words.size(); ++w)
    for (std::size_t g = 0; g < alg.generators().size(); ++g) {
      const auto& gen = alg.generators()[g];
      if (gen.source_block != pr.words[w].target_block) continue;
      auto x = alg.multiply(gen.element, coords[w]);
      if (!span.add(x)) continue;
      pr.words.push_back({pr.words[w].source_block, gen.target_block, static_cast<long>(w), g});
      coords.push_back(x);
    }
  if (pr.words.size() != n) throw PreconditionError("generators do not span the algebra");
  pr.words_to_basis = detail::columns_to_matrix(p, n, coords);
  pr.basis_to_words = *inverse(pr.words_to_basis);
  for (std::size_t g = 0; g < alg.generators().size(); ++g)
    for (std::size_t w = 0; w < n; ++w) {
      if (alg.generators()[g].source_block != pr.words[w].target_block) continue;
      auto x = alg.multiply(alg.generators()[g].element, coords[w]);
      FieldMatrix xc(p, n, 1, x);
      auto y = pr.basis_to_words * xc;
      Presentation::Relation rel{g, w, {}};
      for (std::size_t j = 0; j < n; ++j)
        if (y(j, 0)) rel.rhs.emplace_back(j, y(j, 0));
      // g * w is itself a word: holds by definition
      if (rel.rhs.size() == 1 && rel.rhs[0].second == 1) {
        const auto& wj = pr.words[rel.rhs[0].first];
        if (wj.parent == static_cast<long>(w) && wj.generator == g) continue;
      }
      pr.relations.push_back(std::move(rel));
    }
  return pr;
}

namespace detail {

// Generator matrices of a module whose basis is grouped by block.
struct GeneratorTuple {
  std::vector<std::size_t> dims;      // per block
  std::vector<std::size_t> offsets;   // start of each generator's entries
  std::vector<std::uint8_t> entries;  // row-major, generators concatenated
};

inline std::vector<std::size_t> tuple_layout(const Algebra& alg, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const auto& g : alg.generators()) {
    offsets.push_back(off);
    off += dims[g.target_block] * dims[g.source_block];
  }
  offsets.push_back(off);
  return offsets;
}

inline std::string tuple_key(const std::vector<std::size_t>& dims, const std::vector<std::uint8_t>& entries) {
  std::string key;
  key.reserve(dims.size() + entries.size());
  for (auto d : dims) key.push_back(static_cast<char>(d));
  for (auto e : entries) key.push_back(static_cast<char>(e));
  return key;
}

// Builds the module from generator matrices via the word basis.
inline Module module_from_tuple(const AlgebraPtr& alg, const Presentation& pr, const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& offsets, const std::vector<std::uint8_t>& entries) {
  const Residue p = alg->p();
  std::size_t total = 0;
  std::vector<std::size_t> start;
  for (auto d : dims) {
    start.push_back(total);
    total += d;
  }
  auto gen_matrix = [&](std::size_t g) {
    const auto& gen = alg->generators()[g];
    FieldMatrix m(p, total, total);
    std::size_t rows = dims[gen.target_block], cols = dims[gen.source_block];
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        m.at(start[gen.target_block] + r, start[gen.source_block] + c) = entries[offsets[g] + r * cols + c];
    return m;
  };
  std::vector<FieldMatrix> gm;
  for (std::size_t g = 0; g < alg->generators().size(); ++g) gm.push_back(gen_matrix(g));
  std::vector<FieldMatrix> word_mats;
  for (const auto& w : pr.words) {
    if (w.parent < 0) {
      FieldMatrix e(p, total, total);
      for (std::size_t i = 0; i < dims[w.source_block]; ++i) e.at(start[w.source_block] + i, start[w.source_block] + i) = 1;
      word_mats.push_back(e);
    } else {
      word_mats.push_back(gm[w.generator] * word_mats[static_cast<std::size_t>(w.parent)]);
    }
  }
  std::vector<FieldMatrix> act;
  for (std::size_t k = 0; k < alg->dim(); ++k) {
    FieldMatrix a(p, total, total);
    for (std::size_t j = 0; j < pr.words.size(); ++j)
      if (pr.basis_to_words(j, k)) a = a + pr.basis_to_words(j, k) * word_mats[j];
    act.push_back(std::move(a));
  }
  return Module(alg, total, std::move(act));
}

// Evaluates the relations on a tuple. Entries are small residues.
class TupleChecker {
 public:
  TupleChecker(const Algebra& alg, const Presentation& pr, const std::vector<std::size_t>& dims,
               const std::vector<std::size_t>& offsets)
      : alg_(alg), pr_(pr), dims_(dims), offsets_(offsets), p_(alg.p()) {
    word_mats_.resize(pr.words.size());
    for (std::size_t j = 0; j < pr.words.size(); ++j) {
      const auto& w = pr.words[j];
      word_mats_[j].assign(dims[w.target_block] * dims[w.source_block], 0);
    }
  }

  bool check(const std::vector<std::uint8_t>& e) {
    // word matrices: identity for idempotents, generator times parent otherwise
    for (std::size_t j = 0; j < pr_.words.size(); ++j) {
      const auto& w = pr_.words[j];
      auto& out = word_mats_[j];
      const std::size_t rows = dims_[w.target_block], cols = dims_[w.source_block];
      if (w.parent < 0) {
        std::fill(out.begin(), out.end(), 0);
        for (std::size_t i = 0; i < rows; ++i) out[i * cols + i] = 1;
        continue;
      }
      const auto& par = word_mats_[static_cast<std::size_t>(w.parent)];
      const auto& gen = alg_.generators()[w.generator];
      const std::size_t inner = dims_[gen.source_block];
      const std::uint8_t* g = e.data() + offsets_[w.generator];
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          unsigned acc = 0;
          for (std::size_t k = 0; k < inner; ++k) acc += unsigned(g[r * inner + k]) * par[k * cols + c];
          out[r * cols + c] = static_cast<std::uint8_t>(acc % p_);
        }
    }
    for (const auto& rel : pr_.relations) {
      const auto& w = pr_.words[rel.word];
      const auto& gen = alg_.generators()[rel.generator];
      const std::size_t rows = dims_[gen.target_block], cols = dims_[w.source_block],
                        inner = dims_[gen.source_block];
      if (rows == 0 || cols == 0) continue;
      const std::uint8_t* g = e.data() + offsets_[rel.generator];
      const auto& wm = word_mats_[rel.word];
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          unsigned acc = 0;
          for (std::size_t k = 0; k < inner; ++k) acc += unsigned(g[r * inner + k]) * wm[k * cols + c];
          unsigned rhs = 0;
          for (const auto& [j, coef] : rel.rhs) rhs += coef * word_mats_[j][r * cols + c];
          if (acc % p_ != rhs % p_) return false;
        }
    }
    return true;
  }

  /// p = 2 fast path: entry (r, c) of generator g is bit offsets[g] + r*cols + c
  /// of code, and matrices are stored as row bitmasks.
  bool check_bits(std::uint64_t code) {
    const auto& gens = alg_.generators();
    grows_.resize(gens.size());
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const std::size_t rows = dims_[gens[g].target_block], cols = dims_[gens[g].source_block];
      const std::uint64_t mask = (std::uint64_t{1} << cols) - 1;
      grows_[g].resize(rows);
      for (std::size_t r = 0; r < rows; ++r)
        grows_[g][r] = static_cast<std::uint32_t>((code >> (offsets_[g] + r * cols)) & mask);
    }
    wrows_.resize(pr_.words.size());
    for (std::size_t j = 0; j < pr_.words.size(); ++j) {
      const auto& w = pr_.words[j];
      auto& out = wrows_[j];
      const std::size_t rows = dims_[w.target_block];
      out.resize(rows);
      if (w.parent < 0) {
        for (std::size_t r = 0; r < rows; ++r) out[r] = std::uint32_t{1} << r;
        continue;
      }
      const auto& par = wrows_[static_cast<std::size_t>(w.parent)];
      const auto& g = grows_[w.generator];
      for (std::size_t r = 0; r < rows; ++r) {
        std::uint32_t acc = 0;
        for (std::uint32_t bits = g[r]; bits; bits &= bits - 1) acc ^= par[static_cast<std::size_t>(__builtin_ctz(bits))];
        out[r] = acc;
      }
    }
    for (const auto& rel : pr_.relations) {
      const auto& g = grows_[rel.generator];
      const auto& wm = wrows_[rel.word];
      for (std::size_t r = 0; r < g.size(); ++r) {
        std::uint32_t acc = 0;
        for (std::uint32_t bits = g[r]; bits; bits &= bits - 1) acc ^= wm[static_cast<std::size_t>(__builtin_ctz(bits))];
        for (const auto& [j, coef] : rel.rhs)
          if (coef & 1) acc ^= wrows_[j][r];
        if (acc) return false;
      }
    }
    return true;
  }

 private:
  std::vector<std::vector<std::uint32_t>> grows_, wrows_;
  const Algebra& alg_;
  const Presentation& pr_;
  std::vector<std::size_t> dims_, offsets_;
  Residue p_;
  std::vector<std::vector<std::uint8_t>> word_mats_;
};

inline void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t k = total + 1; k-- > 0;) {
    cur.push_back(k);
    compositions(total - k, parts, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// Iso-class representatives of all modules up to a dimension bound, with an
/// exact lookup from any block adapted module to its class.
class ModuleCatalog {
 public:
  ModuleCatalog(AlgebraPtr alg, std::size_t max_dim, std::uint64_t budget = std::uint64_t{1} << 27)
      : alg_(std::move(alg)), max_dim_(max_dim), pr_(make_presentation(*alg_)) {
    if (alg_->p() > 255) throw PreconditionError("enumeration supports p < 256");
    build(budget);
  }

  const AlgebraPtr& algebra() const { return alg_; }
  std::size_t max_dim() const { return max_dim_; }
  const std::vector<Module>& modules() const { return reps_; }
  const Module& operator[](std::size_t i) const { return reps_[i]; }
  std::size_t size() const { return reps_.size(); }
  std::uint64_t candidates_visited() const { return visited_; }
  const Presentation& presentation() const { return pr_; }

  /// Index of the class of m, or nothing when m is larger than the bound.
  std::optional<std::size_t> identify(const Module& m) const {
    if (m.algebra() != alg_) throw ParentMismatch();
    if (m.dim() > max_dim_) return std::nullopt;
    if (m.adapted()) {
      auto key = key_of(m);
      auto it = index_.find(key);
      if (it != index_.end()) return it->second;
      return std::nullopt;
    }
    for (std::size_t i = 0; i < reps_.size(); ++i)
      if (reps_[i].dim() == m.dim() && is_isomorphic(reps_[i], m)) return i;
    return std::nullopt;
  }

  std::size_t index_of_zero() const { return 0; }

 private:
  std::string key_of(const Module& m) const {
    const auto nb = alg_->blocks().size();
    std::vector<std::vector<std::size_t>> idx(nb);
    std::vector<std::size_t> dims(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      idx[b] = m.block_indices(b);
      dims[b] = idx[b].size();
    }
    std::vector<std::uint8_t> entries;
    for (std::size_t g = 0; g < alg_->generators().size(); ++g) {
      const auto& gen = alg_->generators()[g];
      const auto& gm = m.generator_action(g);
      for (auto r : idx[gen.target_block])
        for (auto c : idx[gen.source_block]) entries.push_back(static_cast<std::uint8_t>(gm(r, c)));
    }
    return detail::tuple_key(dims, entries);
  }

  void build(std::uint64_t budget) {
    const auto& alg = *alg_;
    const Residue p = alg.p();
    const std::size_t nb = alg.blocks().size();
    // budget check before any work
    std::vector<std::vector<std::size_t>> dim_vectors;
    for (std::size_t m = 0; m <= max_dim_; ++m) {
      std::vector<std::size_t> cur;
      std::vector<std::vector<std::size_t>> out;
      detail::compositions(m, nb, cur, out);
      for (auto& v : out) dim_vectors.push_back(v);
    }
    long double total = 0;
    for (const auto& dims : dim_vectors) {
      auto offs = detail::tuple_layout(alg, dims);
      total += std::pow(static_cast<long double>(p), static_cast<long double>(offs.back()));
    }
    if (total > static_cast<long double>(budget))
    {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3Le", total);
      throw BudgetExceeded(std::string("enumeration needs ") + buf + " candidates, budget is " + std::to_string(budget));
    }

    Residue lambda = 1;  // primitive root for scalings
    for (Residue c = 2; c < p; ++c) {
      Residue x = c, order = 1;
      while (x != 1) x = x * c % p, ++order;
      if (order == p - 1) {
        lambda = c;
        break;
      }
    }

    for (const auto& dims : dim_vectors) {
      auto offs = detail::tuple_layout(alg, dims);
      const std::size_t e = offs.back();
      detail::TupleChecker checker(alg, pr_, dims, offs);
      std::vector<std::uint8_t> entries(e, 0);
      const bool bits = p == 2 && e < 63 &&
                        std::all_of(dims.begin(), dims.end(), [](std::size_t d) { return d <= 32; });
      if (bits) {
        const std::uint64_t end = std::uint64_t{1} << e;
        for (std::uint64_t code = 0; code < end; ++code) {
          ++visited_;
          if (!checker.check_bits(code)) continue;
          for (std::size_t i = 0; i < e; ++i) entries[i] = static_cast<std::uint8_t>((code >> i) & 1);
          auto key = detail::tuple_key(dims, entries);
          if (index_.count(key)) continue;
          std::size_t cls = reps_.size();
          reps_.push_back(detail::module_from_tuple(alg_, pr_, dims, offs, entries));
          orbit(dims, offs, entries, cls, lambda);
        }
        continue;
      }
      for (;;) {
        ++visited_;
        if (checker.check(entries)) {
          auto key = detail::tuple_key(dims, entries);
          if (!index_.count(key)) {
            std::size_t cls = reps_.size();
            reps_.push_back(detail::module_from_tuple(alg_, pr_, dims, offs, entries));
            orbit(dims, offs, entries, cls, lambda);
          }
        }
        std::size_t i = 0;
        while (i < e && ++entries[i] == p) entries[i++] = 0;
        if (i == e) break;
      }
    }
  }

  // Marks the GL-orbit (change of basis inside each block) of a tuple.
  void orbit(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& offs,
             const std::vector<std::uint8_t>& seed, std::size_t cls, Residue lambda) {
    const auto& alg = *alg_;
    const Residue p = alg.p();
    const Residue lambda_inv = lambda == 1 ? 1 : mod_inverse(lambda, p);
    std::deque<std::vector<std::uint8_t>> queue{seed};
    index_.emplace(detail::tuple_key(dims, seed), cls);
    auto at = [&](std::vector<std::uint8_t>& e, std::size_t g, std::size_t r, std::size_t c) -> std::uint8_t& {
      return e[offs[g] + r * dims[alg.generators()[g].source_block] + c];
    };
    while (!queue.empty()) {
      auto cur = std::move(queue.front());
      queue.pop_front();
      for (std::size_t b = 0; b < dims.size(); ++b) {
        const std::size_t d = dims[b];
        // elementary moves: transvections (i != j) and, for p > 2, scalings (i == j)
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) {
            if (i == j && p == 2) continue;
            auto nx = cur;
            for (std::size_t g = 0; g < alg.generators().size(); ++g) {
              const auto& gen = alg.generators()[g];
              const std::size_t rows = dims[gen.target_block], cols = dims[gen.source_block];
              if (gen.target_block == b) {
                for (std::size_t c = 0; c < cols; ++c) {
                  auto& x = at(nx, g, i, c);
                  if (i == j)
                    x = static_cast<std::uint8_t>(x * lambda % p);
                  else
                    x = static_cast<std::uint8_t>((x + at(nx, g, j, c)) % p);
                }
              }
              if (gen.source_block == b) {
                for (std::size_t r = 0; r < rows; ++r) {
                  if (i == j) {
                    auto& x = at(nx, g, r, i);
                    x = static_cast<std::uint8_t>(x * lambda_inv % p);
                  } else {
                    auto& x = at(nx, g, r, j);
                    x = static_cast<std::uint8_t>((x + p - at(nx, g, r, i)) % p);
                  }
                }
              }
            }
            auto key = detail::tuple_key(dims, nx);
            if (index_.emplace(std::move(key), cls).second) queue.push_back(std::move(nx));
          }
      }
    }
  }

  AlgebraPtr alg_;
  std::size_t max_dim_;
  Presentation pr_;
  std::vector<Module> reps_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t visited_ = 0;
};

inline ModuleCatalog enumerate_modules(const AlgebraPtr& alg, std::size_t max_dim,
                                       std::uint64_t budget = std::uint64_t{1} << 27) {
  return ModuleCatalog(alg, max_dim, budget);
}

}  // namespace cotorsion
