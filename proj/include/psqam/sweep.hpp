#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psqam/fec.hpp"
#include "psqam/metrics.hpp"
#include "psqam/pas.hpp"
#include "psqam/shaping.hpp"

namespace psqam::sweep {

// One constellation under test, identified by a stable token:
// "uniform", "P1".."P4", or "nu:<float>" for an arbitrary MB parameter.
struct DistributionSpec {
    std::string id;
    shaping::ShapedConstellation constellation;

    static DistributionSpec parse(const std::string& token);
};

struct SweepConfig {
    std::vector<DistributionSpec> distributions;
    std::vector<double> snrs_db;
    std::uint64_t frames = 100;        // full-chain frames per grid point
    std::uint64_t seed = 1;
    std::size_t mi_samples = 200000;
    int workers = 1;                   // worker threads over grid points
    double baud_ghz = 32.0;
    int polarizations = 2;
    bool mi_only = false;              // skip the FEC chain, metrics only
    int max_iterations = 50;           // decoder cap
    shaping::CodeRate code_rate{};     // reporting only; the code itself is 5/6
};

struct SimulationRecord {
    std::string distribution_id;
    double snr_db = 0.0;
    double entropy_bits = 0.0;
    double rate_bits = 0.0;            // R = H - (1-c)m
    double net_rate_gbps = 0.0;
    double mi_bits = 0.0;
    double gmi_bits = 0.0;
    std::optional<double> ber;         // absent when mi_only
    std::optional<double> fer;
    std::uint64_t frames = 0;
    std::uint64_t seed = 0;
    std::uint64_t code_hash = 0;
};

// full grid run; records come back sorted (distribution, snr) regardless of
// worker count, and every value is reproducible from (config, seed)
std::vector<SimulationRecord> run_sweep(const SweepConfig& cfg);

// frames of the PAS chain at one SNR point
metrics::ErrorStats run_point(const pas::Session& session, double snr_db, std::uint64_t frames,
                              std::uint64_t seed, const fec::DecodeOptions& opts = {});

// SNR (dB) where the chain first reaches FER <= target, scanned coarse-to-fine
// from `start_db` upward; deterministic in `seed`
double measure_fer_threshold(const pas::Session& session, double start_db, double target_fer,
                             std::uint64_t seed, const fec::DecodeOptions& opts = {});

// serialization; schema documented in the README
void write_csv(std::ostream& os, const std::vector<SimulationRecord>& records,
               const SweepConfig& cfg);
void write_json(std::ostream& os, const std::vector<SimulationRecord>& records,
                const SweepConfig& cfg);

// --- rate table ---------------------------------------------------------------

struct RateRow {
    std::string label;          // "OP1".."OP4", "uniform", "Ref1".."Ref4"
    std::string scheme;         // "PS-64QAM", "64QAM", "16QAM"
    double overhead_percent;    // FEC overhead (1/c - 1) * 100
    double entropy_bits;
    double rate_bits;           // info bits per symbol
    double net_rate_gbps;
};

// the shaped operating points at 20% overhead next to fixed-QAM references
std::vector<RateRow> rate_table(double baud_ghz = 32.0, int polarizations = 2);

void write_rate_table_csv(std::ostream& os, const std::vector<RateRow>& rows);
void write_rate_table_text(std::ostream& os, const std::vector<RateRow>& rows);

}  // namespace psqam::sweep
