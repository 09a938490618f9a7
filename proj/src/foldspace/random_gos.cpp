#include "foldspace/random_gos.hpp"

#include <algorithm>
#include <random>

namespace foldspace {

namespace {

Letters random_reduced_word(std::mt19937_64& rng, int rank, int len) {
  Letters w;
  while (static_cast<int>(w.size()) < len) {
    int k = 1 + static_cast<int>(rng() % rank);
    int x = (rng() % 2) ? k : -k;
    if (!w.empty() && w.back() == -x) continue;
    w.push_back(x);
  }
  return w;
}

Letters random_cyclic_word(std::mt19937_64& rng, int rank, int len) {
  for (int tries = 0; tries < 64; ++tries) {
    Letters w = random_reduced_word(rng, rank, len);
    if (w.size() >= 2 && w.front() == -w.back()) continue;
    if (!free_reduce(w).empty()) return w;
  }
  return {1};
}

std::optional<std::vector<int>> align_circuit(const LabeledGraph& H, const std::vector<int>& bottom,
                                              const std::vector<int>& top) {
  if (bottom.size() != top.size()) return std::nullopt;
  int L = static_cast<int>(bottom.size());
  auto labels = [&](const std::vector<int>& c) {
    Letters out;
    for (int o : c) out.push_back(H.label[o]);
    return out;
  };
  Letters lb = labels(bottom);
  for (int orient = 0; orient < 2; ++orient) {
    std::vector<int> cand = top;
    if (orient == 1) {
      std::reverse(cand.begin(), cand.end());
      for (int& o : cand) o ^= 1;
    }
    for (int r = 0; r < L; ++r) {
      std::vector<int> rot(cand.begin() + r, cand.end());
      rot.insert(rot.end(), cand.begin(), cand.begin() + r);
      if (labels(rot) == lb) return rot;
    }
  }
  return std::nullopt;
}

}  // namespace

Gos gen_random_gos(uint64_t seed, const RandomGosParams& params) {
  for (uint64_t attempt = 0; attempt < 64; ++attempt) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + attempt * 0x2545f491ull + 1);
    int rank = 1 + static_cast<int>(rng() % 3);
    Alphabet alpha(rank);
    // random folded cores as the horizontal graph
    LabeledGraph H;
    H.alphabet = alpha;
    int ncomp = 1 + static_cast<int>(rng() % 2);
    for (int c = 0; c < ncomp; ++c) {
      int ngens = 1 + static_cast<int>(rng() % 3);
      std::vector<Letters> gens;
      for (int g = 0; g < ngens; ++g)
        gens.push_back(random_reduced_word(rng, rank, 1 + static_cast<int>(rng() % 4)));
      FoldedSubgroup f = stallings_fold(alpha, gens);
      if (f.core.g.ne() == 0) continue;
      int off = H.g.nv;
      H.g.nv += f.core.g.nv;
      for (int e = 0; e < f.core.g.ne(); ++e) {
        H.g.add_edge(f.core.g.iota(2 * e) + off, f.core.g.tau(2 * e) + off);
        H.label.push_back(f.core.label[2 * e]);
        H.label.push_back(f.core.label[2 * e + 1]);
      }
    }
    if (H.g.ne() == 0 || H.g.ne() > params.max_vertex_graph_edges) continue;

    // random annuli between immersed circuits with matching labels
    int nann = 1 + static_cast<int>(rng() % 3);
    std::vector<AnnulusSpec> annuli;
    for (int a = 0; a < nann; ++a) {
      Letters w = random_cyclic_word(rng, rank, 1 + static_cast<int>(rng() % 4));
      CyclicWord c = cyclic_canonical(Word{alpha, free_reduce(w)});
      auto circuits = circle_immersion(c, H);
      if (circuits.empty()) continue;
      const Circuit& bottom = circuits[rng() % circuits.size()];
      const Circuit& top = circuits[rng() % circuits.size()];
      auto aligned = align_circuit(H, bottom.oedges, top.oedges);
      if (!aligned) continue;
      annuli.push_back({bottom.oedges, *aligned});
    }
    if (annuli.empty()) continue;
    try {
      BuiltGos b = assemble_tracks(H, annuli);
      if (b.gos.u.ne() > params.max_underlying_edges) continue;
      if (!validate(b.gos).ok) continue;
      return b.gos;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error("gen_random_gos: no valid instance found for the seed");
}

PrimitiveAdjoinRoot random_primitive_adjoin_root(uint64_t seed, int rank, int k) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 7);
  Alphabet alpha(rank);
  auto type_ii = all_type_ii(alpha);
  // random automorphism as a short product of type-II moves
  std::vector<WhiteheadAut> moves;
  int nmoves = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < nmoves; ++i) moves.push_back(type_ii[rng() % type_ii.size()]);
  auto apply_all = [&](Letters w) {
    for (const auto& m : moves) w = m.apply_letters(w);
    return w;
  };
  auto apply_all_inverse = [&](Letters w) {
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) w = it->inverse().apply_letters(w);
    return w;
  };
  Letters gamma = free_reduce(apply_all({1}));
  // phi = (a_1 -> a_1^k twist) after the inverse automorphism; then
  // phi(gamma) = a_1^k and the root maps to a_1
  PrimitiveAdjoinRoot out;
  out.data.base_rank = rank;
  out.data.roots = {{gamma, k}};
  auto twist = [&](const Letters& w) {
    Letters t;
    for (int x : w) {
      if (x == 1) t.insert(t.end(), static_cast<size_t>(k), 1);
      else if (x == -1) t.insert(t.end(), static_cast<size_t>(k), -1);
      else t.push_back(x);
    }
    return free_reduce(t);
  };
  for (int g = 1; g <= rank; ++g) out.base_images.push_back(twist(apply_all_inverse({g})));
  out.root_images = {{1}};
  return out;
}

}  // namespace foldspace
