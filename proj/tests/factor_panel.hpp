// Synthetic price panels driven by one common factor, for network tests.
#pragma once

#include <aclag/synthetic.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testdata {

struct Block {
    std::size_t rows = 300;
    double coupling = 0.5;  ///< factor loading of every series' returns, in [0, 1)
};

inline std::string label(std::size_t k) {
    std::ostringstream os;
    os << 'C' << std::setw(2) << std::setfill('0') << (k + 1);
    return os.str();
}

inline std::string iso_day(int day_offset) {
    using namespace std::chrono;
    const year_month_day d{sys_days{2010y / January / 1} + days{day_offset}};
    std::ostringstream os;
    os << static_cast<int>(d.year()) << '-' << std::setw(2) << std::setfill('0') << static_cast<unsigned>(d.month())
       << '-' << std::setw(2) << static_cast<unsigned>(d.day());
    return os.str();
}

/**
 * Writes consecutive blocks of daily rows. Series k's return is
 * c * f(t - lag_k) + sqrt(1 - c^2) * e_k(t) with a shared Gaussian factor f
 * and lag_k = k % 4; prices are 100 plus the running sum. Every
 * `missing_every`-th row leaves one value empty.
 */
inline void write_factor_panel(std::ostream& os, std::size_t series, const std::vector<Block>& blocks,
                               std::uint64_t seed, std::size_t missing_every = 0) {
    aclag::Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.rows;
    std::vector<double> factor(total + 4);
    for (auto& v : factor) v = g(rng);

    os << "timestamp";
    for (std::size_t k = 0; k < series; ++k) os << ',' << label(k);
    os << '\n' << std::setprecision(10);
    std::vector<double> price(series, 100.0);
    std::size_t t = 0;
    for (const auto& b : blocks) {
        const double idio = std::sqrt(1.0 - b.coupling * b.coupling);
        for (std::size_t r = 0; r < b.rows; ++r, ++t) {
            os << iso_day(static_cast<int>(t));
            for (std::size_t k = 0; k < series; ++k) {
                price[k] += b.coupling * factor[t + 4 - k % 4] + idio * g(rng);
                os << ',';
                if (missing_every == 0 || (t + 1) % missing_every != 0 || k != t % series) os << price[k];
            }
            os << '\n';
        }
    }
}

}  // namespace testdata
