#include "spslab/sg.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "spslab/errors.hpp"

namespace spslab {

SGConfig::SGConfig(const FieldSpec& f, int n, std::vector<FormVec> vecs)
    : field(f), nvars(n), vectors(std::move(vecs)) {
    std::set<FormVec> seen;
    for (const auto& v : vectors) {
        if (v.dim() != nvars) throw input_error("config vector dimension mismatch");
        if (v.is_zero()) throw input_error("config contains the zero vector");
        if (!seen.insert(v.normalized()).second)
            throw input_error("config contains scalar multiples: " + v.str());
    }
}

int SGConfig::rank() const { return rank_of(field, nvars, vectors); }

namespace {

// Shared closure scan: the first (lex over sorted normalized vectors)
// independent k-subset whose span contains no other config vector.
SGResult closure_scan(const SGConfig& s, int k, std::size_t cap) {
    if (k < 2) throw input_error("SG closure needs k >= 2");
    SGResult out;
    out.closed = true;
    const std::size_t m = s.vectors.size();
    if (m < static_cast<std::size_t>(k)) return out;  // no k-subsets: vacuously closed

    std::vector<FormVec> sorted;
    for (const auto& v : s.vectors) sorted.push_back(v.normalized());
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    std::size_t visited = 0;
    while (true) {
        if (++visited > cap) throw resource_error("SG subset enumeration exceeds cap");
        std::vector<FormVec> subset;
        for (auto i : idx) subset.push_back(sorted[i]);
        Subspace span = Subspace::span_of(s.field, s.nvars, subset);
        if (span.rank() == k) {
            std::size_t count = 0;
            for (const auto& v : sorted)
                if (span.contains(v)) ++count;
            if (count == static_cast<std::size_t>(k)) {
                out.closed = false;
                out.witness = subset;
                return out;
            }
        }
        // next k-combination
        int pos = k - 1;
        while (pos >= 0 &&
               idx[static_cast<std::size_t>(pos)] == m - static_cast<std::size_t>(k - pos))
            --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

}  // namespace

SGResult is_sg_closed(const SGConfig& s, int k, std::size_t cap) {
    return closure_scan(s, k, cap);
}

SGResult sg_operator(const SGConfig& s, int k, std::size_t cap) {
    return closure_scan(s, k, cap);
}

FormVec heavy_vector(const SGConfig& s, int k, const std::vector<FormVec>& basis_vectors) {
    if (k < 2) throw input_error("heavy_vector needs k >= 2");
    const int r = static_cast<int>(basis_vectors.size());
    Subspace span = Subspace::span_of(s.field, s.nvars, basis_vectors);
    if (span.rank() != r || r != s.rank())
        throw precondition_error("heavy_vector: given vectors are not a basis of the config");
    for (const auto& b : basis_vectors) {
        bool found = false;
        for (const auto& v : s.vectors)
            if (v.normalized() == b.normalized()) found = true;
        if (!found) throw precondition_error("heavy_vector: basis vector not in the config");
    }

    std::vector<std::vector<Scalar>> cols;
    for (const auto& b : basis_vectors) cols.push_back(b.coeffs);
    std::vector<std::vector<int>> supports;
    for (const auto& v : s.vectors) {
        auto sol = solve_dense(s.field, cols, v.coeffs);
        if (!sol) throw structural_error("heavy_vector: vector outside the basis span");
        std::vector<int> sup;
        for (int i = 0; i < r; ++i)
            if (!(*sol)[static_cast<std::size_t>(i)].is_zero()) sup.push_back(i);
        supports.push_back(std::move(sup));
    }

    std::vector<bool> covered(static_cast<std::size_t>(r), false);
    int ncovered = 0;
    int picks = 0;
    std::optional<std::size_t> first_pick;
    while (ncovered < r) {
        std::optional<std::size_t> best;
        std::size_t best_size = 0;
        for (std::size_t i = 0; i < supports.size(); ++i) {
            bool disjoint = !supports[i].empty();
            for (int c : supports[i])
                if (covered[static_cast<std::size_t>(c)]) disjoint = false;
            if (disjoint && supports[i].size() > best_size) {
                best = i;
                best_size = supports[i].size();
            }
        }
        if (!best) throw structural_error("heavy_vector: greedy step has no candidate");
        ++picks;
        if (!first_pick) first_pick = *best;
        for (int c : supports[*best]) {
            covered[static_cast<std::size_t>(c)] = true;
            ++ncovered;
        }
    }
    if (picks >= k)
        throw structural_error("heavy_vector: cover used k picks; config is not SG_k-closed");
    const std::vector<int>& sup = supports[*first_pick];
    if (static_cast<long>(sup.size()) * (k - 1) < r)
        throw structural_error("heavy_vector: support bound violated; config is not SG_k-closed");
    return s.vectors[*first_pick];
}

SGConfig gen_skew_lines() {
    FieldSpec q = FieldSpec::rational();
    std::vector<FormVec> vecs{
        FormVec::from_ints(q, {1, 1, 0, 0}), FormVec::from_ints(q, {1, 1, 1, 0}),
        FormVec::from_ints(q, {1, 1, 2, 0}), FormVec::from_ints(q, {1, 0, 1, 0}),
        FormVec::from_ints(q, {1, 0, 1, 1}), FormVec::from_ints(q, {1, 0, 1, 2})};
    return SGConfig(q, 4, std::move(vecs));
}

FpConfigParts gen_fp_config_parts(int k, int r, std::uint64_t p) {
    if (k < 3) throw input_error("fp config needs k >= 3");
    if (r < 1) throw input_error("fp config needs r >= 1");
    FieldSpec f = FieldSpec::prime(p);
    if (static_cast<std::uint64_t>(k - 1) % p == 0)
        throw input_error("fp config needs p not dividing k-1");
    double count = 1;
    for (int i = 0; i < r; ++i) count *= static_cast<double>(p);
    if (count > 200000) throw resource_error("fp config: p^r exceeds desk scale");

    const int n = k + r;
    std::vector<FormVec> s1;
    for (int i = 0; i < k - 1; ++i) {
        FormVec v(f, n);
        v.coeffs[static_cast<std::size_t>(i)] = Scalar::one(f);
        v.coeffs[static_cast<std::size_t>(n - 1)] = Scalar::one(f);
        s1.push_back(v);
    }
    {
        Scalar inv = Scalar::from_int(f, k - 1).inverse();
        FormVec v(f, n);
        for (int i = 0; i < k - 1; ++i) v.coeffs[static_cast<std::size_t>(i)] = inv;
        v.coeffs[static_cast<std::size_t>(n - 1)] = Scalar::one(f);
        s1.push_back(v);
    }

    // The extended tail vectors: all p^r - 1 nonzero tail assignments, made
    // pairwise non-multiple by the final coordinate 1.
    std::vector<FormVec> s2_extended;
    // The tail space as a multiple-free set: normalized projective
    // representatives, unextended. The closure facts live here; extending
    // every tail vector by 1 breaks SG_2-closure for small p (at p = 3 the
    // line through ext(u) and ext(2u) meets S only in those two points).
    std::vector<FormVec> s2_projective;
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(r), 0);
    while (true) {
        // advance the odometer
        int pos = 0;
        while (pos < r) {
            if (++digits[static_cast<std::size_t>(pos)] < p) break;
            digits[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == r) break;
        FormVec v(f, n);
        for (int i = 0; i < r; ++i)
            v.coeffs[static_cast<std::size_t>(k - 1 + i)] =
                Scalar::residue(f, digits[static_cast<std::size_t>(i)]);
        v.coeffs[static_cast<std::size_t>(n - 1)] = Scalar::one(f);
        s2_extended.push_back(v);

        FormVec tail(f, r);
        for (int i = 0; i < r; ++i)
            tail.coeffs[static_cast<std::size_t>(i)] =
                Scalar::residue(f, digits[static_cast<std::size_t>(i)]);
        if (tail == tail.normalized()) s2_projective.push_back(tail);
    }

    std::vector<FormVec> all = s1;
    all.insert(all.end(), s2_extended.begin(), s2_extended.end());
    return FpConfigParts{SGConfig(f, n, std::move(all)), SGConfig(f, n, std::move(s1)),
                         SGConfig(f, r, std::move(s2_projective))};
}

SGConfig gen_fp_config(int k, int r, std::uint64_t p) {
    return gen_fp_config_parts(k, r, p).all;
}

FormVec trun(const FormVec& ell, const MonicFrame& frame) {
    auto dec = orthogonal_decompose(ell, frame.y0, frame.u_space, frame.k_space);
    if (dec.alpha.is_zero())
        throw precondition_error("trun: form not monic; run make_monic first");
    const FieldSpec& f = ell.field;
    auto coords = frame.u_space.in_span(dec.u);
    if (!coords) throw structural_error("trun: u component outside U");
    FormVec out(f, 1 + frame.u_space.rank());
    out.coeffs[0] = Scalar::one(f);
    Scalar inv = dec.alpha.inverse();
    for (std::size_t i = 0; i < coords->size(); ++i) out.coeffs[i + 1] = (*coords)[i] * inv;
    return out;
}

std::vector<FormVec> trun_set(const std::vector<FormVec>& forms, const MonicFrame& frame) {
    std::vector<FormVec> out;
    for (const auto& f : forms) {
        FormVec t = trun(f, frame);
        bool dup = false;
        for (const auto& u : out)
            if (u == t) dup = true;
        if (!dup) out.push_back(std::move(t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Partitions and chains.

bool partition_is_trivial(const Partition& p) { return p.size() <= 1; }

bool partition_splits(const Partition& p, const std::vector<int>& s) {
    if (s.empty()) return false;
    for (const auto& cls : p) {
        std::size_t inter = 0;
        for (int e : s)
            if (std::find(cls.begin(), cls.end(), e) != cls.end()) ++inter;
        if (inter != 0 && inter != s.size()) return true;
    }
    return false;
}

void validate_partition(int universe, const Partition& p) {
    std::vector<bool> seen(static_cast<std::size_t>(universe), false);
    for (const auto& cls : p) {
        if (cls.empty()) throw input_error("partition contains an empty class");
        for (int e : cls) {
            if (e < 0 || e >= universe) throw input_error("partition element out of range");
            if (seen[static_cast<std::size_t>(e)]) throw input_error("partition classes overlap");
            seen[static_cast<std::size_t>(e)] = true;
        }
    }
    for (bool b : seen)
        if (!b) throw input_error("partition does not cover the universe");
}

bool chain_is_unbroken(const PartitionCollection& pc, const Chain& chain) {
    if (chain.sets.empty()) return false;
    if (chain.sets.size() != chain.source_partitions.size()) return false;
    std::set<int> sources;
    std::vector<bool> in_union(static_cast<std::size_t>(pc.universe), false);
    for (std::size_t i = 0; i < chain.sets.size(); ++i) {
        int src = chain.source_partitions[i];
        if (src < 0 || src >= static_cast<int>(pc.partitions.size())) return false;
        if (!sources.insert(src).second) return false;  // sets from distinct partitions
        const Partition& p = pc.partitions[static_cast<std::size_t>(src)];
        std::vector<int> sorted_set = chain.sets[i];
        std::sort(sorted_set.begin(), sorted_set.end());
        bool is_class = false;
        for (const auto& cls : p) {
            std::vector<int> sc = cls;
            std::sort(sc.begin(), sc.end());
            if (sc == sorted_set) is_class = true;
        }
        if (!is_class) return false;
        for (int e : chain.sets[i]) in_union[static_cast<std::size_t>(e)] = true;
    }
    std::vector<int> complement;
    for (int e = 0; e < pc.universe; ++e)
        if (!in_union[static_cast<std::size_t>(e)]) complement.push_back(e);
    if (complement.empty()) return false;
    for (int src : chain.source_partitions) {
        if (partition_splits(pc.partitions[static_cast<std::size_t>(src)], complement))
            return false;
    }
    return true;
}

namespace {

// Exhaustive search via a subset-reachability sweep per complement candidate.
// Only valid at small universe sizes; used as the permanent cross-check.
std::optional<Chain> exhaustive_impl(const PartitionCollection& pc) {
    const int k = pc.universe;
    if (k > 20) throw resource_error("exhaustive chain search limited to small universes");
    const std::uint32_t full = (k >= 32) ? 0xffffffffu : ((1u << k) - 1);
    const std::size_t m = pc.partitions.size();

    for (std::uint32_t comp = 1; comp <= full; ++comp) {
        if (comp == full) continue;  // complement must be proper (target nonempty)
        std::vector<int> comp_set;
        for (int e = 0; e < k; ++e)
            if (comp & (1u << e)) comp_set.push_back(e);
        const std::uint32_t target = full & ~comp;

        // Eligible: partitions preserving the complement; classes disjoint
        // from it.
        std::vector<std::size_t> eligible;
        std::vector<std::vector<std::uint32_t>> class_masks;
        for (std::size_t pi = 0; pi < m; ++pi) {
            if (partition_splits(pc.partitions[pi], comp_set)) continue;
            eligible.push_back(pi);
            std::vector<std::uint32_t> masks;
            for (const auto& cls : pc.partitions[pi]) {
                std::uint32_t mask = 0;
                for (int e : cls) mask |= (1u << e);
                if ((mask & comp) == 0) masks.push_back(mask);
            }
            class_masks.push_back(std::move(masks));
        }

        // reachable[mask]: (partition position, class index) used to reach it.
        std::map<std::uint32_t, std::vector<std::pair<int, int>>> reached;
        reached[0] = {};
        for (std::size_t t = 0; t < eligible.size(); ++t) {
            auto snapshot = reached;
            for (const auto& [mask, how] : snapshot) {
                for (std::size_t ci = 0; ci < class_masks[t].size(); ++ci) {
                    std::uint32_t nm = mask | class_masks[t][ci];
                    if (!reached.count(nm)) {
                        auto how2 = how;
                        how2.emplace_back(static_cast<int>(t), static_cast<int>(ci));
                        reached.emplace(nm, std::move(how2));
                    }
                }
            }
        }
        auto it = reached.find(target);
        if (it == reached.end() || it->second.empty()) continue;
        Chain chain;
        for (auto [t, ci] : it->second) {
            std::size_t pi = eligible[static_cast<std::size_t>(t)];
            std::uint32_t mask = class_masks[static_cast<std::size_t>(t)][static_cast<std::size_t>(ci)];
            std::vector<int> cls;
            for (int e = 0; e < k; ++e)
                if (mask & (1u << e)) cls.push_back(e);
            // recover the actual class (masks are unique per class)
            for (const auto& c : pc.partitions[pi]) {
                std::vector<int> sc = c;
                std::sort(sc.begin(), sc.end());
                if (sc == cls) {
                    chain.sets.push_back(c);
                    break;
                }
            }
            chain.source_partitions.push_back(static_cast<int>(pi));
        }
        if (chain_is_unbroken(pc, chain)) return chain;
    }
    return std::nullopt;
}

// The phase/round labelling: assuming the splitting property, produce
// distinct partition indices label[b] with partition label[b] splitting
// {b, last}. Returns nullopt when the bounded process gives up (the
// exhaustive fallback then decides).
std::optional<std::vector<int>> claim_singleton_labels(const std::vector<Partition>& parts,
                                                       int k) {
    const int last = k - 1;
    const std::size_t m = parts.size();
    std::vector<int> label(static_cast<std::size_t>(k - 1), -1);
    std::vector<bool> in_pool(m, true);
    long steps = 0;
    const long step_cap = 2'000'000;

    auto splits_pair = [&](std::size_t pi, int a, int b) {
        return partition_splits(parts[pi], std::vector<int>{a, b});
    };

    // Phase 1.
    {
        bool found = false;
        for (std::size_t pi = 0; pi < m && !found; ++pi) {
            if (in_pool[pi] && splits_pair(pi, 0, last)) {
                label[0] = static_cast<int>(pi);
                in_pool[pi] = false;
                found = true;
            }
        }
        if (!found) return std::nullopt;
    }

    for (int i = 1; i <= k - 2; ++i) {
        // Levels of covered elements 0..i-1; levels[l] is E_{l+1}.
        std::vector<std::vector<int>> levels;
        levels.emplace_back();
        for (int b = 0; b < i; ++b) levels[0].push_back(b);

        auto e_upto = [&](int l) {
            // E_{<=l} = {i, last} + levels 1..l (levels[0..l-1]).
            std::vector<int> s{i, last};
            for (int t = 0; t < l && t < static_cast<int>(levels.size()); ++t)
                for (int e : levels[static_cast<std::size_t>(t)]) s.push_back(e);
            return s;
        };

        bool found = false;

        auto pool_direct = [&]() {
            for (std::size_t pi = 0; pi < m; ++pi) {
                if (in_pool[pi] && splits_pair(pi, i, last)) {
                    label[static_cast<std::size_t>(i)] = static_cast<int>(pi);
                    in_pool[pi] = false;
                    return true;
                }
            }
            return false;
        };

        auto promote = [&](int elem, int from_level, int to_level) {
            auto& lv = levels[static_cast<std::size_t>(from_level)];
            lv.erase(std::find(lv.begin(), lv.end(), elem));
            while (static_cast<int>(levels.size()) <= to_level) levels.emplace_back();
            levels[static_cast<std::size_t>(to_level)].push_back(elem);
        };

        // Process a displaced partition: may relabel lower levels (cascading
        // promotions), find the phase's partition, or drop into the pool.
        // pool_level: the pool must preserve E_{<=pool_level}.
        auto process_hanging = [&](std::size_t hang, int pool_level) {
            while (true) {
                if (++steps > step_cap) return false;
                if (splits_pair(hang, i, last)) {
                    label[static_cast<std::size_t>(i)] = static_cast<int>(hang);
                    found = true;
                    return true;
                }
                bool swapped = false;
                for (int l = 0; l <= pool_level - 1 && !swapped; ++l) {
                    if (l >= static_cast<int>(levels.size())) break;
                    std::vector<int> base = e_upto(l);
                    for (int c : std::vector<int>(levels[static_cast<std::size_t>(l)])) {
                        std::vector<int> probe = base;
                        probe.push_back(c);
                        if (partition_splits(parts[hang], probe)) {
                            std::size_t old =
                                static_cast<std::size_t>(label[static_cast<std::size_t>(c)]);
                            label[static_cast<std::size_t>(c)] = static_cast<int>(hang);
                            promote(c, l, l + 1);
                            hang = old;
                            swapped = true;
                            break;
                        }
                    }
                }
                if (!swapped) {
                    in_pool[hang] = true;
                    return true;
                }
            }
        };

        if (pool_direct()) continue;

        int round = 1;
        while (!found) {
            if (round > i + 2 || steps > step_cap) return std::nullopt;
            while (static_cast<int>(levels.size()) < round + 1) levels.emplace_back();
            bool progressed = true;
            while (progressed && !found) {
                if (++steps > step_cap) return std::nullopt;
                progressed = false;
                std::vector<int> e_base = e_upto(round - 1);
                for (int b : std::vector<int>(levels[static_cast<std::size_t>(round - 1)])) {
                    std::optional<std::size_t> splitter;
                    std::vector<int> probe = e_base;
                    probe.push_back(b);
                    for (std::size_t pi = 0; pi < m; ++pi) {
                        if (in_pool[pi] && partition_splits(parts[pi], probe)) {
                            splitter = pi;
                            break;
                        }
                    }
                    if (!splitter) continue;
                    std::size_t old = static_cast<std::size_t>(label[static_cast<std::size_t>(b)]);
                    label[static_cast<std::size_t>(b)] = static_cast<int>(*splitter);
                    in_pool[*splitter] = false;
                    promote(b, round - 1, round);
                    if (!process_hanging(old, round - 1)) return std::nullopt;
                    if (found) break;
                    if (pool_direct()) {
                        found = true;
                        break;
                    }
                    progressed = true;
                    break;  // pool changed: re-scan the level from scratch
                }
            }
            if (found) break;
            // Round complete: everything left in the level is a failure.
            ++round;
            if (round - 1 >= static_cast<int>(levels.size()) ||
                levels[static_cast<std::size_t>(round - 1)].empty())
                return std::nullopt;
        }
        if (!found) return std::nullopt;
    }
    return std::vector<int>(label.begin(), label.end());
}

struct MergedInstance {
    std::vector<std::vector<int>> groups;       // current universe as original-element groups
    std::vector<int> part_indices;              // into the original collection
    std::vector<Partition> parts;               // over group indices
};

std::optional<Chain> lemma_search(const PartitionCollection& original, MergedInstance inst,
                                  int depth) {
    const int k = static_cast<int>(inst.groups.size());
    if (k < 2 || depth > original.universe + 2) return std::nullopt;
    if (static_cast<int>(inst.parts.size()) < k - 1) return std::nullopt;

    auto lift = [&](const Chain& group_chain) {
        Chain out;
        for (std::size_t t = 0; t < group_chain.sets.size(); ++t) {
            std::vector<int> elems;
            for (int g : group_chain.sets[t])
                for (int e : inst.groups[static_cast<std::size_t>(g)]) elems.push_back(e);
            std::sort(elems.begin(), elems.end());
            out.sets.push_back(std::move(elems));
            out.source_partitions.push_back(
                inst.part_indices[static_cast<std::size_t>(
                    group_chain.source_partitions[t])]);
        }
        return out;
    };

    // Find a splitting-property violation: a proper subset S with |S| >= 2
    // split by fewer than |S|-1 partitions.
    std::optional<std::vector<int>> violation;
    for (std::uint32_t mask = 1; mask < (1u << k) - 1 && !violation; ++mask) {
        int size = __builtin_popcount(mask);
        if (size < 2) continue;
        std::vector<int> s;
        for (int e = 0; e < k; ++e)
            if (mask & (1u << e)) s.push_back(e);
        int splitters = 0;
        for (const auto& p : inst.parts)
            if (partition_splits(p, s)) ++splitters;
        if (splitters < size - 1) violation = s;
    }

    if (violation) {
        // Merge S into one element and recurse on the preserving partitions.
        const std::vector<int>& s = *violation;
        std::vector<int> group_map(static_cast<std::size_t>(k), -1);
        MergedInstance next;
        std::vector<int> merged_group;
        for (int g : s)
            for (int e : inst.groups[static_cast<std::size_t>(g)]) merged_group.push_back(e);
        std::sort(merged_group.begin(), merged_group.end());
        for (int g = 0; g < k; ++g) {
            if (std::find(s.begin(), s.end(), g) != s.end()) continue;
            group_map[static_cast<std::size_t>(g)] = static_cast<int>(next.groups.size());
            next.groups.push_back(inst.groups[static_cast<std::size_t>(g)]);
        }
        int merged_id = static_cast<int>(next.groups.size());
        next.groups.push_back(merged_group);
        for (int g : s) group_map[static_cast<std::size_t>(g)] = merged_id;

        for (std::size_t pi = 0; pi < inst.parts.size(); ++pi) {
            if (partition_splits(inst.parts[pi], s)) continue;
            Partition projected;
            for (const auto& cls : inst.parts[pi]) {
                std::set<int> mapped;
                for (int g : cls) mapped.insert(group_map[static_cast<std::size_t>(g)]);
                projected.emplace_back(mapped.begin(), mapped.end());
            }
            if (partition_is_trivial(projected)) continue;
            next.part_indices.push_back(inst.part_indices[pi]);
            next.parts.push_back(std::move(projected));
        }
        auto sub = lemma_search(original, std::move(next), depth + 1);
        if (sub) return sub;  // already lifted to original elements
        return std::nullopt;
    }

    // Splitting property holds: the labelling procedure yields a chain with
    // singleton complement {last}.
    auto labels = claim_singleton_labels(inst.parts, k);
    if (!labels) return std::nullopt;
    Chain group_chain;
    for (int b = 0; b < k - 1; ++b) {
        const Partition& p = inst.parts[static_cast<std::size_t>((*labels)[static_cast<std::size_t>(b)])];
        for (const auto& cls : p) {
            if (std::find(cls.begin(), cls.end(), b) != cls.end()) {
                group_chain.sets.push_back(cls);
                break;
            }
        }
        group_chain.source_partitions.push_back((*labels)[static_cast<std::size_t>(b)]);
    }
    return lift(group_chain);
}

}  // namespace

std::optional<Chain> exhaustive_unbroken_chain(const PartitionCollection& pc) {
    for (const auto& p : pc.partitions) validate_partition(pc.universe, p);
    return exhaustive_impl(pc);
}

std::optional<Chain> find_unbroken_chain(const PartitionCollection& pc) {
    for (const auto& p : pc.partitions) validate_partition(pc.universe, p);

    MergedInstance inst;
    for (int e = 0; e < pc.universe; ++e) inst.groups.push_back({e});
    for (std::size_t pi = 0; pi < pc.partitions.size(); ++pi) {
        if (partition_is_trivial(pc.partitions[pi])) continue;
        inst.part_indices.push_back(static_cast<int>(pi));
        inst.parts.push_back(pc.partitions[pi]);
    }

    std::optional<Chain> chain = lemma_search(pc, std::move(inst), 0);
    if (!chain && pc.universe <= 8) chain = exhaustive_impl(pc);
    if (chain && !chain_is_unbroken(pc, *chain))
        throw structural_error("unbroken chain failed the definitional re-check");
    return chain;
}

// ---------------------------------------------------------------------------
// Families and the split lemma.

FamilyTable family_table(const SPSCircuit& c, const Subspace& k_space) {
    const int k = c.fanin();
    FamilyTable table;
    std::vector<FormVec> keys;  // normalized residues of class representatives
    for (const auto& term : c.terms) {
        for (const auto& form : term.forms) {
            if (k_space.contains(form)) continue;
            FormVec key = k_space.reduce(form).normalized();
            bool known = false;
            for (const auto& ex : keys)
                if (ex == key) known = true;
            if (known) continue;
            keys.push_back(key);
            FamilyEntry entry;
            entry.rep = form.normalized();
            for (int i = 0; i < k; ++i) {
                std::vector<FormVec> fam_forms;
                for (const auto& tf : c.terms[static_cast<std::size_t>(i)].forms) {
                    if (k_space.contains(tf)) continue;
                    if (k_space.reduce(tf).normalized() == key) fam_forms.push_back(tf);
                }
                entry.fam.emplace_back(Scalar::one(c.field), std::move(fam_forms));
            }
            // Partition of term indices by similarity of family entries.
            std::vector<int> cls_of(static_cast<std::size_t>(k), -1);
            for (int i = 0; i < k; ++i) {
                if (cls_of[static_cast<std::size_t>(i)] != -1) continue;
                int id = static_cast<int>(entry.part.size());
                entry.part.push_back({i});
                cls_of[static_cast<std::size_t>(i)] = id;
                for (int j = i + 1; j < k; ++j) {
                    if (cls_of[static_cast<std::size_t>(j)] != -1) continue;
                    if (terms_similar(entry.fam[static_cast<std::size_t>(i)],
                                      entry.fam[static_cast<std::size_t>(j)])) {
                        entry.part[static_cast<std::size_t>(id)].push_back(j);
                        cls_of[static_cast<std::size_t>(j)] = id;
                    }
                }
            }
            table.entries.push_back(std::move(entry));
        }
    }
    return table;
}

std::optional<SplitViolation> split_lemma_violation(const std::vector<Partition>& parts, int k,
                                                    std::size_t cap) {
    const std::size_t t = parts.size();
    std::size_t checks = 0;
    for (std::uint32_t mask = 1; mask < (1u << t); ++mask) {
        std::vector<int> chosen;
        for (std::size_t i = 0; i < t; ++i)
            if (mask & (1u << i)) chosen.push_back(static_cast<int>(i));
        // Iterate over class choices for the chosen tuple indices.
        std::vector<std::size_t> pick(chosen.size(), 0);
        while (true) {
            if (++checks > cap) throw resource_error("split lemma enumeration exceeds cap");
            std::vector<bool> in_union(static_cast<std::size_t>(k), false);
            for (std::size_t i = 0; i < chosen.size(); ++i) {
                const auto& cls =
                    parts[static_cast<std::size_t>(chosen[i])][pick[i]];
                for (int e : cls) in_union[static_cast<std::size_t>(e)] = true;
            }
            std::vector<int> complement;
            for (int e = 0; e < k; ++e)
                if (!in_union[static_cast<std::size_t>(e)]) complement.push_back(e);
            if (!complement.empty()) {
                bool split = false;
                for (int c : chosen)
                    if (partition_splits(parts[static_cast<std::size_t>(c)], complement))
                        split = true;
                if (!split) {
                    SplitViolation v;
                    v.tuple_indices = chosen;
                    for (std::size_t i = 0; i < chosen.size(); ++i)
                        v.class_choices.push_back(static_cast<int>(pick[i]));
                    v.complement = complement;
                    return v;
                }
            }
            // next class choice
            std::size_t pos = 0;
            while (pos < pick.size()) {
                if (++pick[pos] < parts[static_cast<std::size_t>(chosen[pos])].size()) break;
                pick[pos] = 0;
                ++pos;
            }
            if (pos == pick.size()) break;
        }
    }
    return std::nullopt;
}

SplitLemmaReport verify_split_lemma(const SPSCircuit& c, const NucleusReport& report,
                                    const MonicFrame& frame) {
    SplitLemmaReport rep;
    const int k = c.fanin();
    if (k < 3) {
        rep.vacuous = true;
        return rep;
    }
    std::vector<FormVec> complement_forms;
    for (const auto& form : c.terms.front().forms)
        if (!report.k_space.contains(form)) complement_forms.push_back(form);
    if (complement_forms.empty()) {
        rep.vacuous = true;
        return rep;
    }
    std::vector<FormVec> truncated = trun_set(complement_forms, frame);
    SGConfig config(c.field, 1 + frame.u_space.rank(), truncated);
    SGResult op = sg_operator(config, k - 1);
    if (op.closed) {
        rep.vacuous = true;
        return rep;
    }

    // Map each tuple member back to a form of T_1 with that truncation and
    // fetch its family partition.
    FamilyTable table = family_table(c, report.k_space);
    std::vector<Partition> parts;
    for (const auto& ell : op.witness) {
        std::optional<FormVec> source;
        for (const auto& form : complement_forms)
            if (trun(form, frame) == ell) {
                source = form;
                break;
            }
        if (!source) throw structural_error("SG witness vector has no source form");
        FormVec key = report.k_space.reduce(*source).normalized();
        bool found = false;
        for (const auto& entry : table.entries) {
            if (report.k_space.reduce(entry.rep).normalized() == key) {
                parts.push_back(entry.part);
                found = true;
                break;
            }
        }
        if (!found) throw structural_error("family table misses an SG witness class");
    }

    rep.violation = split_lemma_violation(parts, k);
    rep.holds = !rep.violation.has_value();
    return rep;
}

// ---------------------------------------------------------------------------
// Rank bounds and growth.

namespace {

int ceil_lg(long m) {
    if (m < 2) throw input_error("ceil_lg needs m >= 2");
    int bits = 0;
    long v = m - 1;
    while (v > 0) {
        v >>= 1;
        ++bits;
    }
    return bits;  // ceil(log2(m)) for m >= 2
}

}  // namespace

long sg_rank_bound(const FieldSpec& field, int k, int d) {
    if (k < 2) throw input_error("SG rank bound needs k >= 2");
    if (!field.is_prime_field()) return 2L * (k - 1);
    return 9L * k * ceil_lg(std::max(d, 2));
}

RankBoundReport verify_rank_bounds(const SPSCircuit& c) {
    if (!c.is_homogeneous_degrees())
        throw precondition_error("rank bounds need a homogeneous circuit");
    if (!is_simple(c)) throw precondition_error("rank bounds need a simple circuit");
    if (!expand(c).is_zero()) throw precondition_error("rank bounds need an identity");
    if (!is_minimal(c)) throw precondition_error("rank bounds need a minimal identity");

    RankBoundReport rep;
    const int k = c.fanin();
    const int d = c.degree();
    rep.fanin = k;
    rep.degree = d;
    rep.ind_fanin = independent_fanin(c);
    rep.rank = circuit_rank(c);

    NucleusReport nucleus = build_nucleus(c);
    rep.nucleus_rank = nucleus.k_space.rank();
    std::vector<FormVec> complement;
    for (const auto& form : c.all_forms())
        if (!nucleus.k_space.contains(form)) complement.push_back(form);
    rep.non_nucleus_rank = quotient_rank(complement, nucleus.k_space);

    const int kp = rep.ind_fanin;

    {
        BoundRow row;
        row.name = "main-rank-bound";
        row.measured = rep.rank;
        if (!c.field.is_prime_field()) {
            row.bound = "3k^2 = " + std::to_string(3L * k * k);
            row.pass = rep.rank < 3L * k * k;
        } else {
            // rank < 3k^2 lg(2d), compared exactly as 2^rank < (2d)^(3k^2).
            mpz_class lhs, rhs;
            mpz_ui_pow_ui(lhs.get_mpz_t(), 2, static_cast<unsigned long>(rep.rank));
            mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(2 * d),
                          static_cast<unsigned long>(3 * k * k));
            row.bound = "3k^2 lg(2d), k=" + std::to_string(k) + " d=" + std::to_string(d);
            row.pass = lhs < rhs;
        }
        rep.rows.push_back(row);
    }
    {
        BoundRow row;
        row.name = "final-rank-bound";
        long sg = sg_rank_bound(c.field, kp, d);
        long bound = 2L * k * k + static_cast<long>(k - kp) * sg;
        row.bound = "2k^2 + (k-k')SG_{k'} = " + std::to_string(bound);
        row.measured = rep.rank;
        row.pass = rep.rank <= bound;
        rep.rows.push_back(row);
    }
    if (kp == k - 1) {
        BoundRow row;
        row.name = "strong-minimal-non-nucleus";
        long sg = sg_rank_bound(c.field, k - 1, d);
        row.bound = "SG_{k-1}(F,d) = " + std::to_string(sg);
        row.measured = rep.non_nucleus_rank;
        row.pass = rep.non_nucleus_rank <= sg;
        rep.rows.push_back(row);
    }
    for (const auto& row : rep.rows) rep.all_pass = rep.all_pass && row.pass;
    return rep;
}

GrowthReport sg_growth_check(const SGConfig& s, int k) {
    GrowthReport rep;
    rep.closed = is_sg_closed(s, k).closed;
    rep.size = s.vectors.size();
    rep.rank = s.rank();
    rep.k = k;
    if (rep.rank < 9 * k) {
        rep.below_threshold = true;
        rep.satisfied = true;
        return rep;
    }
    // |S| >= 2^(r/9k), compared exactly as |S|^(9k) >= 2^r.
    mpz_class lhs, rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), static_cast<unsigned long>(rep.size),
                  static_cast<unsigned long>(9 * k));
    mpz_ui_pow_ui(rhs.get_mpz_t(), 2, static_cast<unsigned long>(rep.rank));
    rep.below_threshold = false;
    rep.satisfied = lhs >= rhs;
    return rep;
}

}  // namespace spslab
