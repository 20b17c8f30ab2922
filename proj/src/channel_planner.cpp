#include "vncs/channel_planner.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace vncs {

int ChannelVector::harmonic_index(const LaserConfig& config) const {
    int n = 0;
    for (std::size_t j = 0; j < counts.size(); ++j) n += config.modes.at(j).harmonic * counts[j];
    return n;
}

int ChannelVector::tam(const LaserConfig& config) const {
    int m = 0;
    for (std::size_t j = 0; j < counts.size(); ++j) m += config.modes.at(j).helicity * counts[j];
    return m;
}

int ChannelVector::total_photons() const {
    int n = 0;
    for (int c : counts) n += c;
    return n;
}

namespace {

void fill_channels(const LaserConfig& config, int n_max, std::size_t mode, int used,
                   std::vector<int>& counts, std::vector<ChannelVector>& out) {
    if (mode == config.modes.size()) {
        if (used >= 1) out.push_back({counts});
        return;
    }
    const int nu = config.modes[mode].harmonic;
    for (int c = 0; used + c * nu <= n_max; ++c) {
        counts[mode] = c;
        fill_channels(config, n_max, mode + 1, used + c * nu, counts, out);
    }
    counts[mode] = 0;
}

}  // namespace

std::vector<ChannelVector> enumerate_channels(const LaserConfig& config, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
    std::vector<ChannelVector> out;
    std::vector<int> counts(config.modes.size(), 0);
    fill_channels(config, n_max, 0, 0, counts, out);
    std::sort(out.begin(), out.end(), [&](const ChannelVector& a, const ChannelVector& b) {
        const int na = a.harmonic_index(config);
        const int nb = b.harmonic_index(config);
        if (na != nb) return na < nb;
        return a.counts > b.counts;
    });
    return out;
}

DegeneracyPair make_pair(const ChannelVector& a, const ChannelVector& b, const LaserConfig& config) {
    return {a, b, a.harmonic_index(config) - b.harmonic_index(config), a.tam(config) - b.tam(config)};
}

std::vector<DegeneracyPair> degenerate_pairs(const LaserConfig& config, int n_max) {
    const auto channels = enumerate_channels(config, n_max);
    std::vector<DegeneracyPair> out;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        for (std::size_t k = i + 1; k < channels.size(); ++k) {
            if (channels[i].harmonic_index(config) == channels[k].harmonic_index(config))
                out.push_back(make_pair(channels[i], channels[k], config));
        }
    }
    return out;
}

int delta_ell_rule(int nu, HelicityRelation relation) {
    if (nu < 2) throw std::invalid_argument("no two-color rule for frequency ratio below 2");
    return relation == HelicityRelation::Equal ? nu - 1 : nu + 1;
}

ModePrediction tam_of_channel(const ChannelVector& channel, const LaserConfig& config,
                              int spin_in, int spin_out, int photon_helicity) {
    ModePrediction p;
    p.photon_helicity = photon_helicity;
    p.spin_in = spin_in;
    p.spin_out = spin_out;
    p.tam = channel.tam(config) + (spin_in - spin_out) / 2;
    p.oam = p.tam - photon_helicity;
    return p;
}

bool overlap_test(const DegeneracyPair& pair, double beta, double tolerance) {
    if (beta > 0.0) throw std::invalid_argument("ponderomotive shift must be nonpositive");
    if (pair.delta_n == 0) return true;
    return std::abs(pair.delta_n) <= std::abs(beta) * (1.0 + tolerance);
}

std::string format_channel(const ChannelVector& channel) {
    std::string s = "(";
    for (std::size_t j = 0; j < channel.counts.size(); ++j) {
        if (j) s += ',';
        s += std::to_string(channel.counts[j]);
    }
    return s + ")";
}

void write_atlas(std::ostream& out, const LaserConfig& config, int n_max,
                 const std::function<double(int)>& beta_of_n) {
    out << "channel\tN\ttam\tell_helicity_minus\tell_helicity_plus\tbeta\ts_lo\ts_hi\n";
    for (const auto& ch : enumerate_channels(config, n_max)) {
        const int n = ch.harmonic_index(config);
        const double beta = beta_of_n(n);
        const auto support = channel_support(n, beta);
        const int m = ch.tam(config);
        out << format_channel(ch) << '\t' << n << '\t' << m << '\t' << m + 1 << '\t' << m - 1 << '\t'
            << beta << '\t' << support.lo << '\t' << support.hi << '\n';
    }
}

void write_degeneracies(std::ostream& out, const LaserConfig& config, int n_max, int photon_helicity) {
    out << "first\tsecond\tN\tell_first\tell_second\tdelta_ell\n";
    for (const auto& pair : degenerate_pairs(config, n_max)) {
        const int l1 = pair.first.tam(config) - photon_helicity;
        const int l2 = pair.second.tam(config) - photon_helicity;
        out << format_channel(pair.first) << '\t' << format_channel(pair.second) << '\t'
            << pair.first.harmonic_index(config) << '\t' << l1 << '\t' << l2 << '\t' << std::abs(l1 - l2) << '\n';
    }
}

}  // namespace vncs
