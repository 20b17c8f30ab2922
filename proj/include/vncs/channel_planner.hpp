#pragma once

// Multiphoton absorption channels n = (n_1, ..., n_N), their degeneracies and
// the angular-momentum labels they imprint on the emitted photon.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vncs/physcore.hpp"

namespace vncs {

struct ChannelVector {
    std::vector<int> counts;

    // N(n) = sum_j nu_j n_j
    int harmonic_index(const LaserConfig& config) const;
    // m'(n) = sum_j n_j Lambda_j
    int tam(const LaserConfig& config) const;
    int total_photons() const;

    bool operator==(const ChannelVector&) const = default;
};

struct DegeneracyPair {
    ChannelVector first;
    ChannelVector second;
    int delta_n = 0;     // N(first) - N(second)
    int delta_tam = 0;   // m'(first) - m'(second)
};

struct ModePrediction {
    int photon_helicity = -1;
    int spin_in = +1;
    int spin_out = +1;
    int tam = 0;  // m'
    int oam = 0;  // l' = m' - Lambda'
};

enum class HelicityRelation { Equal, Opposite };

// Every channel with 1 <= N(n) <= n_max, sorted by N then by descending counts.
std::vector<ChannelVector> enumerate_channels(const LaserConfig& config, int n_max);

// All unordered pairs of distinct channels with N(n) = N(n'), both within n_max.
std::vector<DegeneracyPair> degenerate_pairs(const LaserConfig& config, int n_max);

DegeneracyPair make_pair(const ChannelVector& a, const ChannelVector& b, const LaserConfig& config);

// |delta l'| for a two-colour driver with frequency ratio nu.
int delta_ell_rule(int nu, HelicityRelation relation);

// Selection rule m' = sum_j n_j Lambda_j + (lambda - lambda')/2, l' = m' - Lambda'.
// Spins are the +/-1 helicity labels of the electron.
ModePrediction tam_of_channel(const ChannelVector& channel, const LaserConfig& config,
                              int spin_in, int spin_out, int photon_helicity);

// Support intervals overlap: |delta N| <= |beta| (1 + tolerance).
bool overlap_test(const DegeneracyPair& pair, double beta, double tolerance = 0.05);

std::string format_channel(const ChannelVector& channel);

// Tab-separated channel atlas: counts, N, m', l' for each photon helicity, support
// interval. beta_of_n gives the ponderomotive shift to use for harmonic index N.
void write_atlas(std::ostream& out, const LaserConfig& config, int n_max,
                 const std::function<double(int)>& beta_of_n);

// Tab-separated list of exact degeneracies with the no-flip l' of both members.
void write_degeneracies(std::ostream& out, const LaserConfig& config, int n_max, int photon_helicity);

}  // namespace vncs
