#include "spslab/pit.hpp"

#include <random>

#include "spslab/errors.hpp"

namespace spslab {

RankBound rank_bound(int k, int d, const FieldSpec& field) {
    if (k < 2) throw input_error("rank_bound needs k >= 2 (k=1 terms are never zero)");
    if (d < 1) throw input_error("rank_bound needs d >= 1");
    RankBound rb{k, d, field, 0};
    if (!field.is_prime_field()) {
        rb.value = 3L * k * k;
    } else {
        // ceil(3k^2 lg(2d)) = ceil(lg((2d)^(3k^2))) = bitlength((2d)^(3k^2) - 1)
        mpz_class x;
        mpz_ui_pow_ui(x.get_mpz_t(), static_cast<unsigned long>(2 * d),
                      static_cast<unsigned long>(3 * k * k));
        x -= 1;
        rb.value = static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2));
    }
    return rb;
}

HittingSet hitting_set(int k, int d, int n, const FieldSpec& field, std::size_t point_cap,
                       long rank_bound_override) {
    if (k < 1 || d < 1 || n < 1) throw input_error("hitting_set needs k,d,n >= 1");
    HittingSet h;
    h.k = k;
    h.d = d;
    h.n = n;
    h.field = field;
    // k = 1: a single substitution per alpha suffices, since a term vanishes
    // on a substituted line only when some form vanishes at the alpha powers.
    h.rank_bound_value = k == 1 ? 0 : rank_bound(k, d, field).value;
    if (rank_bound_override >= 0) h.rank_bound_value = rank_bound_override;
    const long r1 = h.rank_bound_value + 1;
    h.subst_vars = static_cast<int>(std::min<long>(n, r1));
    h.alpha_count = 2L * n * d * r1 + 1;

    if (field.is_prime_field() &&
        static_cast<std::uint64_t>(h.alpha_count) >= field.modulus)
        throw input_error("hitting_set: field too small for " + std::to_string(h.alpha_count) +
                          " distinct nonzero values (needs p > |A|)");

    const int m = h.subst_vars;
    double grid_size = 1;
    for (int i = 0; i < m; ++i) grid_size *= static_cast<double>(d + 1);
    if (grid_size * static_cast<double>(h.alpha_count) > static_cast<double>(point_cap))
        throw resource_error("hitting_set: |A| * (d+1)^m = " +
                             std::to_string(grid_size * static_cast<double>(h.alpha_count)) +
                             " exceeds the point cap " + std::to_string(point_cap));

    // Bit-length bound: |a_i| <= m * d * maxA^(n*m).
    {
        mpz_class top;
        mpz_ui_pow_ui(top.get_mpz_t(), static_cast<unsigned long>(h.alpha_count),
                      static_cast<unsigned long>(n) * static_cast<unsigned long>(m));
        top *= static_cast<long>(m) * d;
        h.bit_bound = mpz_sizeinbase(top.get_mpz_t(), 2);
        if (field.is_prime_field())
            h.bit_bound = mpz_sizeinbase(mpz_class(static_cast<unsigned long>(field.modulus)).get_mpz_t(), 2);
    }

    std::vector<int> grid(static_cast<std::size_t>(m), 0);
    for (long a = 1; a <= h.alpha_count; ++a) {
        // Powers alpha^(i*j) for i in [1..n], j in [1..m].
        Scalar alpha = Scalar::from_int(field, a);
        std::vector<Scalar> pow;  // alpha^t for t = 0..n*m
        pow.push_back(Scalar::one(field));
        for (int t = 1; t <= n * m; ++t) pow.push_back(pow.back() * alpha);

        std::fill(grid.begin(), grid.end(), 0);
        while (true) {
            std::vector<Scalar> point;
            point.reserve(static_cast<std::size_t>(n));
            for (int i = 1; i <= n; ++i) {
                Scalar coord = Scalar::zero(field);
                for (int j = 1; j <= m; ++j) {
                    int g = grid[static_cast<std::size_t>(j - 1)];
                    if (g != 0)
                        coord += pow[static_cast<std::size_t>(i * j)] *
                                 Scalar::from_int(field, g);
                }
                point.push_back(coord);
            }
            // Every coordinate obeys the computed bit-length bound.
            for (const auto& coord : point) {
                std::size_t bits = 1;
                if (!field.is_prime_field()) {
                    mpz_class num = coord.rational_value().get_num();
                    bits = mpz_sizeinbase(num.get_mpz_t(), 2);
                }
                if (bits > h.bit_bound)
                    throw structural_error("hitting_set: coordinate exceeds bit bound");
            }
            h.points.push_back(std::move(point));

            int pos = 0;
            while (pos < m) {
                if (++grid[static_cast<std::size_t>(pos)] <= d) break;
                grid[static_cast<std::size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == m) break;
        }
    }
    return h;
}

BlackboxResult blackbox_test(const PointOracle& oracle, const HittingSet& h) {
    BlackboxResult out;
    if (h.points.empty()) {
        out.empty_warning = true;
        return out;
    }
    for (const auto& p : h.points) {
        if (!oracle(p).is_zero()) {
            out.zero = false;
            out.witness = p;
            return out;
        }
    }
    return out;
}

RandomTestResult schwartz_zippel_test(const SPSCircuit& c, int trials, std::uint64_t seed) {
    if (trials < 1) throw input_error("schwartz_zippel_test needs trials >= 1");
    RandomTestResult out;
    const int d = c.degree();
    if (c.field.is_prime_field()) {
        out.sample_space = static_cast<long>(c.field.modulus);
        out.degenerate_bound = c.field.modulus <= static_cast<std::uint64_t>(d);
    } else {
        out.sample_space = std::max(2L * d, 100L) + 1;
    }
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        std::vector<Scalar> point;
        for (int i = 0; i < c.nvars; ++i) {
            long v = static_cast<long>(rng() % static_cast<std::uint64_t>(out.sample_space));
            point.push_back(Scalar::from_int(c.field, v));
        }
        if (!evaluate(c, point).is_zero()) {
            out.probably_zero = false;
            out.witness = std::move(point);
            return out;
        }
    }
    return out;
}

}  // namespace spslab
