#include "spslab/nucleus.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "spslab/errors.hpp"

namespace spslab {

PathEnumerator::PathEnumerator(const SPSCircuit& c, std::vector<int> prefix, TermIdeal base)
    : circuit_(c), prefix_(std::move(prefix)), base_(std::move(base)) {
    for (std::size_t a = 0; a < prefix_.size(); ++a) {
        if (prefix_[a] < 0 || prefix_[a] >= c.fanin())
            throw input_error("path prefix index out of range");
        for (std::size_t b = a + 1; b < prefix_.size(); ++b)
            if (prefix_[a] == prefix_[b])
                throw input_error("path prefix indexes a term twice");
    }
    spans_.push_back(base_.radspan());
}

bool PathEnumerator::descend() {
    while (levels_.size() < prefix_.size()) {
        const MultTerm& term =
            circuit_.terms[static_cast<std::size_t>(prefix_[levels_.size()])];
        Level lv{nodes_of(term, spans_.back()), 0};
        if (lv.options.nodes.empty()) return false;  // degree-0 term: no nodes
        Subspace next = spans_.back();
        for (const auto& form : lv.options.nodes.front().forms) next.insert(form);
        levels_.push_back(std::move(lv));
        spans_.push_back(std::move(next));
    }
    return true;
}

bool PathEnumerator::advance() {
    while (!levels_.empty()) {
        spans_.pop_back();
        Level& lv = levels_.back();
        if (++lv.chosen < lv.options.nodes.size()) {
            Subspace next = spans_.back();
            for (const auto& form : lv.options.nodes[lv.chosen].forms) next.insert(form);
            spans_.push_back(std::move(next));
            return true;
        }
        levels_.pop_back();
    }
    return false;
}

Path PathEnumerator::emit() const {
    Path p(base_);
    for (std::size_t j = 0; j < levels_.size(); ++j) {
        p.nodes.push_back(levels_[j].options.nodes[levels_[j].chosen]);
        p.sources.push_back(prefix_[j]);
    }
    p.cumulative = spans_.back();
    return p;
}

std::optional<Path> PathEnumerator::next() {
    if (done_) return std::nullopt;
    if (!started_) {
        started_ = true;
        if (descend()) return emit();
        // fall through to backtracking when a level had no nodes
    }
    while (advance()) {
        if (descend()) return emit();
    }
    done_ = true;
    return std::nullopt;
}

std::vector<Path> all_paths(const SPSCircuit& c, const std::vector<int>& prefix,
                            const TermIdeal& base, std::size_t limit) {
    PathEnumerator en(c, prefix, base);
    std::vector<Path> out;
    while (auto p = en.next()) {
        out.push_back(std::move(*p));
        if (out.size() > limit) throw resource_error("path enumeration exceeds limit");
    }
    return out;
}

namespace {

Poly tail_sum_expansion(const SPSCircuit& c, int from) {
    Poly acc(c.field, c.nvars);
    for (int j = from; j < c.fanin(); ++j)
        acc = acc + c.terms[static_cast<std::size_t>(j)].expand(c.nvars);
    return acc;
}

bool node_in_nodeset(const MultTerm& node, const NodeSet& ns) {
    for (const auto& n : ns.nodes)
        if (n == node) return true;
    return false;
}

}  // namespace

bool verify_certificate(const SPSCircuit& c, const Certificate& cert) {
    const int k = c.fanin();
    const int i = cert.prefix_len;
    if (i < 0 || i >= k) return false;
    if (cert.survivor != i) return false;
    if (cert.alpha.is_zero()) return false;
    if (cert.path.length() != i) return false;
    for (int j = 0; j < i; ++j)
        if (cert.path.sources[static_cast<std::size_t>(j)] != j) return false;

    // (a) path invariant, level by level.
    Subspace span = cert.path.base.radspan();
    for (int j = 0; j < i; ++j) {
        const MultTerm& node = cert.path.nodes[static_cast<std::size_t>(j)];
        NodeSet ns = nodes_of(c.terms[static_cast<std::size_t>(j)], span);
        if (!node_in_nodeset(node, ns)) return false;
        for (const auto& form : node.forms) span.insert(form);
    }

    TermIdeal path_ideal = cert.path.ideal();

    // (b) the survivor stays outside the path ideal.
    if (term_in_ideal(c.terms[static_cast<std::size_t>(i)], path_ideal)) return false;

    // (c) C_{[i]'} - alpha * T_{i+1} lies in the path ideal (exact expansion
    // equality for the empty path over the zero ideal).
    Poly h = tail_sum_expansion(c, i) -
             c.terms[static_cast<std::size_t>(i)].expand(c.nvars).scaled(cert.alpha);
    return poly_in_ideal(h, path_ideal);
}

std::optional<Certificate> find_certificate(const SPSCircuit& c, const TermIdeal& base) {
    if (!c.is_homogeneous_degrees())
        throw precondition_error("certificate search requires a homogeneous circuit");
    const int k = c.fanin();
    std::vector<Poly> expansions;
    for (const auto& t : c.terms) expansions.push_back(t.expand(c.nvars));

    long paths_tried = 0;
    const long path_cap = 2'000'000;
    for (int i = 0; i < k; ++i) {
        Poly h0(c.field, c.nvars);
        for (int j = i; j < k; ++j) h0 = h0 + expansions[static_cast<std::size_t>(j)];
        const Poly& h1 = expansions[static_cast<std::size_t>(i)];

        std::vector<int> prefix;
        for (int j = 0; j < i; ++j) prefix.push_back(j);
        PathEnumerator en(c, prefix, base);
        try {
            while (auto p = en.next()) {
                if (++paths_tried > path_cap)
                    throw resource_error("path budget exhausted");
                TermIdeal path_ideal = p->ideal();
                if (term_in_ideal(c.terms[static_cast<std::size_t>(i)], path_ideal)) continue;
                auto alpha = affine_membership(h0, h1, path_ideal);
                if (alpha && !alpha->is_zero()) {
                    Certificate cert{i, std::move(*p), *alpha, i};
                    return cert;
                }
            }
        } catch (const resource_error& e) {
            throw resource_error("certificate search stopped at prefix length " +
                                 std::to_string(i) + " after " + std::to_string(paths_tried) +
                                 " paths: " + e.what());
        }
    }
    return std::nullopt;
}

IdentityVerdict path_identity_test(const SPSCircuit& c) {
    auto cert = find_certificate(c, TermIdeal::zero(c.field, c.nvars));
    if (cert) return IdentityVerdict{false, std::move(cert)};
    return IdentityVerdict{true, std::nullopt};
}

std::optional<MatchingPair> compute_matching(const MultTerm& g, const MultTerm& h,
                                             const Subspace& u) {
    const FieldSpec& field = g.coeff.field();
    std::vector<int> g_in, h_in;
    std::vector<int> g_out, h_out;
    for (int i = 0; i < g.degree(); ++i)
        (u.contains(g.forms[static_cast<std::size_t>(i)]) ? g_in : g_out).push_back(i);
    for (int i = 0; i < h.degree(); ++i)
        (u.contains(h.forms[static_cast<std::size_t>(i)]) ? h_in : h_out).push_back(i);
    if (g_in.size() != h_in.size() || g_out.size() != h_out.size()) return std::nullopt;

    MatchingPair mp{Matching{{}, {}, u}, Matching{{}, {}, u}};
    for (std::size_t t = 0; t < g_in.size(); ++t) {
        mp.in_space.pairs.emplace_back(g_in[t], h_in[t]);
        mp.in_space.scales.push_back(Scalar::one(field));
    }

    // Group complement forms by similarity class mod U, in order of first
    // occurrence in g.
    std::vector<FormVec> keys;
    std::vector<std::vector<int>> g_classes, h_classes;
    auto classify = [&](const std::vector<int>& idxs, const MultTerm& term, bool create,
                        std::vector<std::vector<int>>& classes) -> bool {
        for (int i : idxs) {
            FormVec key = u.reduce(term.forms[static_cast<std::size_t>(i)]).normalized();
            std::size_t pos = 0;
            while (pos < keys.size() && !(keys[pos] == key)) ++pos;
            if (pos == keys.size()) {
                if (!create) return false;
                keys.push_back(key);
                g_classes.emplace_back();
                h_classes.emplace_back();
            }
            classes[pos].push_back(i);
        }
        return true;
    };
    classify(g_out, g, true, g_classes);
    if (!classify(h_out, h, false, h_classes)) return std::nullopt;
    for (std::size_t cls = 0; cls < keys.size(); ++cls)
        if (g_classes[cls].size() != h_classes[cls].size()) return std::nullopt;

    for (std::size_t cls = 0; cls < keys.size(); ++cls) {
        for (std::size_t t = 0; t < g_classes[cls].size(); ++t) {
            int gi = g_classes[cls][t];
            int hi = h_classes[cls][t];
            const FormVec& gf = g.forms[static_cast<std::size_t>(gi)];
            const FormVec& hf = h.forms[static_cast<std::size_t>(hi)];
            FormVec rg = u.reduce(gf);
            FormVec rh = u.reduce(hf);
            Scalar scale = rh.leading() / rg.leading();
            if (!(rh - rg.scaled(scale)).is_zero())
                throw structural_error("matching scale inconsistency");
            mp.complement.pairs.emplace_back(gi, hi);
            mp.complement.scales.push_back(scale);
        }
    }
    return mp;
}

bool verify_matching(const MultTerm& g, const MultTerm& h, const Subspace& u,
                     const MatchingPair& m) {
    if (g.degree() != h.degree()) return false;
    std::vector<bool> used_g(static_cast<std::size_t>(g.degree()), false);
    std::vector<bool> used_h(static_cast<std::size_t>(h.degree()), false);
    auto check = [&](const Matching& match, bool inside) {
        if (match.pairs.size() != match.scales.size()) return false;
        for (std::size_t t = 0; t < match.pairs.size(); ++t) {
            auto [gi, hi] = match.pairs[t];
            if (gi < 0 || gi >= g.degree() || hi < 0 || hi >= h.degree()) return false;
            if (used_g[static_cast<std::size_t>(gi)] || used_h[static_cast<std::size_t>(hi)])
                return false;
            used_g[static_cast<std::size_t>(gi)] = used_h[static_cast<std::size_t>(hi)] = true;
            const FormVec& gf = g.forms[static_cast<std::size_t>(gi)];
            const FormVec& hf = h.forms[static_cast<std::size_t>(hi)];
            if (inside != u.contains(gf)) return false;
            if (inside != u.contains(hf)) return false;
            if (match.scales[t].is_zero()) return false;
            if (!u.contains(hf - gf.scaled(match.scales[t]))) return false;
        }
        return true;
    };
    if (!check(m.in_space, true)) return false;
    if (!check(m.complement, false)) return false;
    for (bool b : used_g)
        if (!b) return false;
    for (bool b : used_h)
        if (!b) return false;
    return true;
}

Scalar scaling_factor(const Matching& m) {
    Scalar acc = Scalar::one(m.space.field());
    for (const auto& s : m.scales) acc *= s;
    return acc;
}

namespace {

std::vector<std::vector<int>> graph_components(const std::vector<std::vector<bool>>& adj) {
    const int k = static_cast<int>(adj.size());
    std::vector<int> comp(static_cast<std::size_t>(k), -1);
    int ncomp = 0;
    for (int start = 0; start < k; ++start) {
        if (comp[static_cast<std::size_t>(start)] != -1) continue;
        std::vector<int> queue{start};
        comp[static_cast<std::size_t>(start)] = ncomp;
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int w = 0; w < k; ++w) {
                if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] &&
                    comp[static_cast<std::size_t>(w)] == -1) {
                    comp[static_cast<std::size_t>(w)] = ncomp;
                    queue.push_back(w);
                }
            }
        }
        ++ncomp;
    }
    std::vector<std::vector<int>> out(static_cast<std::size_t>(ncomp));
    for (int v = 0; v < k; ++v) out[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])].push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<bool>> match_adjacency(const SPSCircuit& c, const Subspace& u) {
    const int k = c.fanin();
    std::vector<std::vector<bool>> adj(static_cast<std::size_t>(k),
                                       std::vector<bool>(static_cast<std::size_t>(k), false));
    for (int i = 0; i < k; ++i) {
        adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = true;
        for (int j = i + 1; j < k; ++j) {
            bool m = compute_matching(c.terms[static_cast<std::size_t>(i)],
                                      c.terms[static_cast<std::size_t>(j)], u)
                         .has_value();
            adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m;
            adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = m;
        }
    }
    return adj;
}

MultTerm k_part(const MultTerm& t, const Subspace& k_space) {
    std::vector<FormVec> forms;
    for (const auto& f : t.forms)
        if (k_space.contains(f)) forms.push_back(f);
    return MultTerm(Scalar::one(t.coeff.field()), std::move(forms));
}

// Nucleus identity coefficients: alpha_i = c_i * sc(pi_i) * alpha_1 where
// alpha_1 is the leading tail coefficient of the complement product of T_1.
std::vector<Scalar> nucleus_alphas(const SPSCircuit& c, const Subspace& k_space,
                                   const std::vector<MatchingPair>& matchings) {
    const FieldSpec& field = c.field;
    Transform tau = coordinate_transform(k_space);
    const int r = k_space.rank();
    Scalar alpha1 = Scalar::one(field);
    for (const auto& form : c.terms.front().forms) {
        if (k_space.contains(form)) continue;
        FormVec image = tau.apply(form);
        int j = -1;
        for (int v = c.nvars - 1; v >= r; --v) {
            if (!image.coeffs[static_cast<std::size_t>(v)].is_zero()) {
                j = v;
                break;
            }
        }
        if (j < 0) throw structural_error("non-nucleus form mapped into the head block");
        alpha1 *= image.coeffs[static_cast<std::size_t>(j)];
    }
    std::vector<Scalar> alphas;
    for (int i = 0; i < c.fanin(); ++i) {
        Scalar sc = scaling_factor(matchings[static_cast<std::size_t>(i)].complement);
        alphas.push_back(c.terms[static_cast<std::size_t>(i)].coeff * sc * alpha1);
    }
    return alphas;
}

NucleusReport finish_report(const SPSCircuit& c, const Subspace& k_space, NucleusStage stage,
                            std::vector<int> indep) {
    NucleusReport rep;
    rep.stage = stage;
    rep.k_space = k_space;
    rep.indep = std::move(indep);
    for (int i = 0; i < c.fanin(); ++i) {
        auto m = compute_matching(c.terms.front(), c.terms[static_cast<std::size_t>(i)], k_space);
        if (!m)
            throw structural_error("matching from T_1 failed; input is not a minimal identity");
        rep.matchings.push_back(std::move(*m));
        rep.k_terms.push_back(k_part(c.terms[static_cast<std::size_t>(i)], k_space));
    }
    rep.alphas = nucleus_alphas(c, k_space, rep.matchings);
    return rep;
}

}  // namespace

NucleusReport build_mat_nucleus(const SPSCircuit& c) {
    if (!c.is_homogeneous_degrees())
        throw precondition_error("mat-nucleus requires a homogeneous circuit");
    const int k = c.fanin();
    const TermIdeal zero = TermIdeal::zero(c.field, c.nvars);
    Subspace u = Subspace::zero(c.field, c.nvars);

    auto comps = graph_components(match_adjacency(c, u));
    int rounds = 0;
    while (comps.size() > 1) {
        if (++rounds > k)
            throw structural_error("mat-nucleus did not converge; input is not a minimal identity");
        const std::vector<int>& s = comps.front();  // lexicographically least
        std::vector<int> s_rest;
        for (int v = 0; v < k; ++v)
            if (std::find(s.begin(), s.end(), v) == s.end()) s_rest.push_back(v);

        SPSCircuit c_s = c.subcircuit(s);
        auto cert1 = find_certificate(c_s, zero);
        if (!cert1)
            throw structural_error(
                "certificate search failed on a sub-circuit; input is not a minimal identity");
        TermIdeal base2 = zero.with_all(cert1->path.nodes);
        SPSCircuit c_rest = c.subcircuit(s_rest);
        auto cert2 = find_certificate(c_rest, base2);
        if (!cert2)
            throw structural_error(
                "certificate search failed modulo a path; input is not a minimal identity");

        for (const auto& node : cert1->path.nodes)
            for (const auto& form : node.forms) u.insert(form);
        for (const auto& node : cert2->path.nodes)
            for (const auto& form : node.forms) u.insert(form);

        auto next = graph_components(match_adjacency(c, u));
        if (next.size() >= comps.size())
            throw structural_error("mat-nucleus round did not merge components");
        comps = std::move(next);
    }

    if (u.rank() >= k * k)
        throw structural_error("mat-nucleus rank bound violated");
    return finish_report(c, u, NucleusStage::MatNucleus, {});
}

NucleusReport build_nucleus(const SPSCircuit& c) {
    return build_nucleus(c, greedy_independent_terms(c));
}

NucleusReport build_nucleus(const SPSCircuit& c, const std::vector<int>& indep) {
    const int k = c.fanin();
    if (indep.empty()) throw precondition_error("nucleus needs a nonempty independent set");
    if (!std::is_sorted(indep.begin(), indep.end()))
        throw precondition_error("independent set must be ascending");
    {
        SPSCircuit sel = c.subcircuit(indep);
        if (!term_dependencies(sel).empty())
            throw precondition_error("given terms are not linearly independent");
        if (static_cast<int>(indep.size()) != independent_fanin(c))
            throw precondition_error("independent set is not maximal");
    }

    NucleusReport mat = build_mat_nucleus(c);
    Subspace u = mat.k_space;
    const int kp = static_cast<int>(indep.size());

    auto u_terms = [&](int upto) {
        // K-parts of the first `upto` independent terms wrt the current u.
        std::vector<MultTerm> out;
        for (int a = 0; a < upto; ++a)
            out.push_back(k_part(c.terms[static_cast<std::size_t>(indep[static_cast<std::size_t>(a)])], u));
        return out;
    };

    for (int pi = 1; pi < kp; ++pi) {
        const MultTerm& target = c.terms[static_cast<std::size_t>(indep[static_cast<std::size_t>(pi)])];
        for (int j = 0; j < pi; ++j) {
            // Round j: ensure target not in <U_0..U_j, T_{j+1}..T_{pi-1}>.
            std::vector<MultTerm> uts = u_terms(j + 1);
            TermIdeal u_ideal(c.field, c.nvars, uts);
            std::vector<MultTerm> combo_terms{target};
            for (int r = j + 1; r < pi; ++r)
                combo_terms.push_back(
                    c.terms[static_cast<std::size_t>(indep[static_cast<std::size_t>(r)])]);
            auto combo = combo_in_ideal(combo_terms, 0, u_ideal);
            if (!combo) continue;  // round invariant already holds

            if (!combo->kernel.empty())
                throw structural_error("nucleus round: dependency coefficients not unique");

            // h = target + sum alpha_r T_r, which must escape
            // <U_0..U_{j-1}, v> for some node v of T_j.
            Poly h = target.expand(c.nvars);
            for (std::size_t t = 1; t < combo_terms.size(); ++t)
                h = h + combo_terms[t].expand(c.nvars).scaled(combo->witness[t]);

            std::vector<MultTerm> prev_uts(uts.begin(), uts.end() - 1);
            TermIdeal prev_ideal(c.field, c.nvars, prev_uts);
            const MultTerm& t_j =
                c.terms[static_cast<std::size_t>(indep[static_cast<std::size_t>(j)])];
            NodeSet ns = nodes_of(t_j, prev_ideal.radspan());
            bool grown = false;
            for (const auto& v : ns.nodes) {
                if (!poly_in_ideal(h, prev_ideal.with(v))) {
                    for (const auto& form : v.forms) u.insert(form);
                    grown = true;
                    break;
                }
            }
            if (!grown)
                throw structural_error("nucleus round: no node escapes the ideal");

            // The round invariant must hold after the growth.
            std::vector<MultTerm> uts2 = u_terms(j + 1);
            TermIdeal u_ideal2(c.field, c.nvars, uts2);
            if (combo_in_ideal(combo_terms, 0, u_ideal2))
                throw structural_error("nucleus round invariant failed after growth");
        }
    }

    if (u.rank() >= 2 * k * k)
        throw structural_error("nucleus rank bound violated");

    NucleusReport rep = finish_report(c, u, NucleusStage::Nucleus, indep);

    // Property (3): the nucleus terms over the independent set are linearly
    // independent.
    std::vector<MultTerm> ks;
    for (int i : indep) ks.push_back(rep.k_terms[static_cast<std::size_t>(i)]);
    SPSCircuit kc(c.field, c.nvars, std::move(ks));
    if (!term_dependencies(kc).empty())
        throw structural_error("nucleus terms over the independent set are dependent");
    return rep;
}

SPSCircuit nucleus_identity(const SPSCircuit& c, const NucleusReport& report) {
    std::vector<MultTerm> terms;
    for (int i = 0; i < c.fanin(); ++i)
        terms.emplace_back(report.alphas[static_cast<std::size_t>(i)],
                           report.k_terms[static_cast<std::size_t>(i)].forms);
    SPSCircuit out(c.field, c.nvars, std::move(terms));
    if (!expand(out).is_zero())
        throw structural_error("nucleus identity failed to vanish; matchings invalid");
    return out;
}

bool verify_clm_kmin(const SPSCircuit& c, const NucleusReport& report, int fanin_cap) {
    const int k = c.fanin();
    if (k > fanin_cap) throw resource_error("fanin exceeds subset cap");
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        int r = __builtin_popcount(mask);
        if (r <= 1 || r >= k) continue;
        std::vector<int> subset;
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) subset.push_back(i);
        int last = subset.back();
        std::vector<MultTerm> gens;
        for (std::size_t t = 0; t + 1 < subset.size(); ++t)
            gens.push_back(report.k_terms[static_cast<std::size_t>(subset[t])]);
        TermIdeal ideal(c.field, c.nvars, std::move(gens));
        if (term_in_ideal(report.k_terms[static_cast<std::size_t>(last)], ideal)) return false;
    }
    return true;
}

MonicFrame make_monic(const SPSCircuit& c, const Subspace& k, std::uint64_t seed) {
    const FieldSpec& field = c.field;
    const int n = c.nvars;
    const int d = c.degree();
    if (field.is_prime_field() && field.modulus <= static_cast<std::uint64_t>(d))
        throw input_error("field too small for a monic frame: needs |F| > degree");

    // Complement basis: unit vectors extending K.
    std::vector<FormVec> w;
    Subspace cur = k;
    for (int j = 0; j < n; ++j) {
        FormVec e = FormVec::unit(field, n, j);
        if (cur.insert(e)) w.push_back(e);
    }
    const int r = static_cast<int>(w.size());
    if (r == 0) throw input_error("make_monic: K is the whole space");

    FormVec y0 = w.front();
    std::vector<FormVec> urows(w.begin() + 1, w.end());
    Subspace u_space = Subspace::span_of(field, n, urows);

    // Complement-coordinate vectors of all non-K forms of the circuit.
    std::vector<std::vector<Scalar>> basis_cols;
    for (const auto& row : w) basis_cols.push_back(row.coeffs);
    for (const auto& row : k.basis()) basis_cols.push_back(row.coeffs);
    std::vector<std::vector<Scalar>> avecs;
    for (const auto& term : c.terms) {
        for (const auto& form : term.forms) {
            if (k.contains(form)) continue;
            auto sol = solve_dense(field, basis_cols, form.coeffs);
            if (!sol) throw structural_error("make_monic: basis completion failed");
            avecs.emplace_back(sol->begin(), sol->begin() + r);
        }
    }

    auto all_nonzero = [&](const std::vector<Scalar>& col) {
        for (const auto& a : avecs) {
            Scalar dot = Scalar::zero(field);
            for (int i = 0; i < r; ++i) dot += a[static_cast<std::size_t>(i)] * col[static_cast<std::size_t>(i)];
            if (dot.is_zero()) return false;
        }
        return true;
    };

    // Deterministic grid first: columns (1, t, t^2, ...) for small t, then
    // seeded random columns.
    std::optional<std::vector<Scalar>> found;
    std::vector<long> grid{0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8};
    for (long t : grid) {
        if (field.is_prime_field() && (t < 0 ? -t : t) >= static_cast<long>(field.modulus) && t != 0)
            continue;
        std::vector<Scalar> col(static_cast<std::size_t>(r), Scalar::zero(field));
        Scalar power = Scalar::one(field);
        Scalar tv = Scalar::from_int(field, t);
        for (int i = 0; i < r; ++i) {
            col[static_cast<std::size_t>(i)] = power;
            power *= tv;
        }
        if (all_nonzero(col)) {
            found = col;
            break;
        }
    }
    if (!found) {
        std::mt19937_64 rng(seed);
        for (int tries = 0; tries < 400 && !found; ++tries) {
            std::vector<Scalar> col;
            for (int i = 0; i < r; ++i) {
                long v = field.is_prime_field()
                             ? static_cast<long>(rng() % field.modulus)
                             : static_cast<long>(rng() % 2001) - 1000;
                col.push_back(Scalar::from_int(field, v));
            }
            if (all_nonzero(col)) found = col;
        }
    }
    if (!found) throw input_error("make_monic: no monic direction found; field too small");

    // Complete the found first column to an invertible r x r block.
    std::vector<std::vector<Scalar>> a_cols{*found};
    Subspace colspan = Subspace::span_of(field, r, {FormVec(field, *found)});
    for (int j = 0; j < r && static_cast<int>(a_cols.size()) < r; ++j) {
        FormVec e = FormVec::unit(field, r, j);
        if (colspan.insert(e)) a_cols.push_back(e.coeffs);
    }

    // tau = B^{-1} diag(A, I) B with B the rows [w | K-basis]; A acts on the
    // complement coordinates from the right (row convention), so A's rows
    // are assembled from the columns collected above.
    const int s = k.rank();
    std::vector<std::vector<Scalar>> block(
        static_cast<std::size_t>(r + s),
        std::vector<Scalar>(static_cast<std::size_t>(r + s), Scalar::zero(field)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            block[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                a_cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    for (int i = 0; i < s; ++i)
        block[static_cast<std::size_t>(r + i)][static_cast<std::size_t>(r + i)] = Scalar::one(field);

    std::vector<std::vector<Scalar>> b;
    for (const auto& row : w) b.push_back(row.coeffs);
    for (const auto& row : k.basis()) b.push_back(row.coeffs);
    Transform binv_t(field, b);  // for B^{-1} application

    // M = B^{-1} * block * B
    std::vector<std::vector<Scalar>> m(static_cast<std::size_t>(n),
                                       std::vector<Scalar>(static_cast<std::size_t>(n),
                                                           Scalar::zero(field)));
    for (int row = 0; row < n; ++row) {
        FormVec e = FormVec::unit(field, n, row);
        FormVec coords = binv_t.apply_inverse(e);  // e * B^{-1}
        FormVec mixed(field, n);
        for (int j = 0; j < n; ++j) {
            Scalar acc = Scalar::zero(field);
            for (int t = 0; t < n; ++t)
                acc += coords.coeffs[static_cast<std::size_t>(t)] *
                       block[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
            mixed.coeffs[static_cast<std::size_t>(j)] = acc;
        }
        FormVec out(field, n);
        for (int t = 0; t < n; ++t) {
            if (mixed.coeffs[static_cast<std::size_t>(t)].is_zero()) continue;
            FormVec brow(field, b[static_cast<std::size_t>(t)]);
            out = out + brow.scaled(mixed.coeffs[static_cast<std::size_t>(t)]);
        }
        m[static_cast<std::size_t>(row)] = out.coeffs;
    }
    Transform tau(field, std::move(m));

    // Postconditions: tau fixes K and every non-K form image is monic in y0.
    for (const auto& row : k.basis())
        if (!(tau.apply(row) == row)) throw structural_error("make_monic: tau moves K");
    for (const auto& term : c.terms) {
        for (const auto& form : term.forms) {
            if (k.contains(form)) continue;
            auto dec = orthogonal_decompose(tau.apply(form), y0, u_space, k);
            if (dec.alpha.is_zero())
                throw structural_error("make_monic: image form is not monic");
        }
    }
    return MonicFrame{std::move(tau), std::move(y0), std::move(u_space), k};
}

}  // namespace spslab
