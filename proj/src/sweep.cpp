#include "psqam/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "psqam/channel.hpp"
#include "psqam/version.hpp"

namespace psqam::sweep {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t point_seed(std::uint64_t master, std::size_t dist_idx, std::size_t snr_idx) {
    return mix64(mix64(master ^ (0xD1 + dist_idx)) ^ (0x51E + snr_idx));
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

ccdm::Composition dm_composition(const shaping::ShapedConstellation& c, int n) {
    const auto& ap = c.amplitude_probs();
    return ccdm::quantize_to_composition(std::vector<double>(ap.begin(), ap.end()), n);
}

}  // namespace

DistributionSpec DistributionSpec::parse(const std::string& token) {
    std::string low;
    for (char ch : token) low.push_back(static_cast<char>(std::tolower(ch)));
    if (low == "uniform")
        return {"uniform", shaping::ShapedConstellation::maxwell_boltzmann(0.0)};
    for (auto p : {shaping::Preset::p1, shaping::Preset::p2, shaping::Preset::p3,
                   shaping::Preset::p4}) {
        std::string name = shaping::preset_name(p);
        std::string name_low = name;
        name_low[0] = 'p';
        if (low == name_low) {
            const double nu = shaping::solve_nu_for_entropy(shaping::preset_entropy_bits(p));
            return {name, shaping::ShapedConstellation::maxwell_boltzmann(nu)};
        }
    }
    if (low.rfind("nu:", 0) == 0) {
        std::size_t used = 0;
        double nu = 0.0;
        try {
            nu = std::stod(token.substr(3), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("distribution: cannot parse '" + token + "'");
        }
        if (used != token.size() - 3)
            throw std::invalid_argument("distribution: cannot parse '" + token + "'");
        return {token, shaping::ShapedConstellation::maxwell_boltzmann(nu)};
    }
    throw std::invalid_argument("distribution: unknown token '" + token +
                                "' (want uniform, P1..P4, or nu:<value>)");
}

metrics::ErrorStats run_point(const pas::Session& session, double snr_db, std::uint64_t frames,
                              std::uint64_t seed, const fec::DecodeOptions& opts) {
    metrics::ErrorStats stats;
    const channel::ChannelConfig cfg{snr_db, seed};
    double nv = channel::noise_variance(snr_db);
    if (nv <= 0.0) nv = 1e-6;  // noiseless sentinel still needs finite demap LLRs
    for (std::uint64_t f = 0; f < frames; ++f) {
        const pas::TxFrame tx = session.tx_chain(seed, f);
        const auto y = channel::transmit(tx.symbols, cfg, f);
        const pas::RxFrame rx = session.rx_chain(y, nv, opts);
        const std::size_t errors = pas::Session::payload_bit_errors(tx, rx);
        stats.add_frame(tx.dm_bits.size() + tx.sign_bits.size(), errors);
    }
    return stats;
}

double measure_fer_threshold(const pas::Session& session, double start_db, double target_fer,
                             std::uint64_t seed, const fec::DecodeOptions& opts) {
    // coarse: 0.5 dB ladder with few frames to bracket the waterfall
    double coarse = start_db;
    int step = 0;
    for (;; coarse += 0.5, ++step) {
        if (coarse > start_db + 30.0)
            throw std::runtime_error("fer threshold: no convergence within 30 dB of start");
        const auto st = run_point(session, coarse, 40, mix64(seed ^ (0xC0A + step)), opts);
        if (st.frame_error_rate() <= target_fer) break;
    }
    // fine: 0.25 dB ladder with more frames, starting below the coarse hit
    for (double snr = coarse - 0.5;; snr += 0.25) {
        if (snr > coarse + 3.0)
            throw std::runtime_error("fer threshold: fine scan did not settle");
        const auto st = run_point(session, snr, 100,
                                  mix64(seed ^ (0xF13EULL + std::lround(snr * 4))), opts);
        if (st.frame_error_rate() <= target_fer) return snr;
    }
}

std::vector<SimulationRecord> run_sweep(const SweepConfig& cfg) {
    if (cfg.distributions.empty()) throw std::invalid_argument("sweep: no distributions");
    if (cfg.snrs_db.empty()) throw std::invalid_argument("sweep: no SNR points");

    const bool mi_only = cfg.mi_only || cfg.frames == 0;
    const auto code = std::make_shared<const fec::CodeDefinition>(fec::CodeDefinition::build());
    const std::uint64_t code_hash = code->hash();

    const std::size_t nd = cfg.distributions.size(), ns = cfg.snrs_db.size();
    std::vector<SimulationRecord> records(nd * ns);

    std::vector<std::unique_ptr<pas::Session>> sessions(nd);
    if (!mi_only)
        for (std::size_t d = 0; d < nd; ++d)
            sessions[d] = std::make_unique<pas::Session>(cfg.distributions[d].constellation, code);

    fec::DecodeOptions dec_opts;
    dec_opts.max_iterations = cfg.max_iterations;

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= records.size()) break;
            const std::size_t d = i / ns, si = i % ns;
            const auto& dist = cfg.distributions[d];
            const double snr = cfg.snrs_db[si];
            SimulationRecord& r = records[i];
            r.distribution_id = dist.id;
            r.snr_db = snr;
            r.entropy_bits = dist.constellation.entropy_bits();
            r.rate_bits = shaping::info_rate_bits(r.entropy_bits, cfg.code_rate);
            r.net_rate_gbps = r.rate_bits * cfg.baud_ghz * cfg.polarizations;
            r.seed = point_seed(cfg.seed, d, si);
            r.code_hash = code_hash;

            metrics::MiOptions mi_opts;
            r.mi_bits = metrics::mutual_information(dist.constellation, snr, mi_opts).value_bits;
            r.gmi_bits =
                metrics::bit_metric_rate(dist.constellation, snr, cfg.mi_samples, r.seed)
                    .value_bits;
            if (!mi_only) {
                const auto st = run_point(*sessions[d], snr, cfg.frames, r.seed, dec_opts);
                r.ber = st.bit_error_rate();
                r.fer = st.frame_error_rate();
                r.frames = st.frames;
            }
        }
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return records;
}

void write_csv(std::ostream& os, const std::vector<SimulationRecord>& records,
               const SweepConfig& cfg) {
    os << "# psqam sweep results\n";
    os << "# tool_version=" << kVersion << " schema=" << kSchemaVersion << "\n";
    os << "# seed=" << cfg.seed << " frames=" << cfg.frames << " mi_samples=" << cfg.mi_samples
       << " baud_ghz=" << fmt_double(cfg.baud_ghz) << " polarizations=" << cfg.polarizations
       << " code_rate=" << cfg.code_rate.num << "/" << cfg.code_rate.den << "\n";
    for (const auto& dist : cfg.distributions) {
        const auto comp = dm_composition(dist.constellation, 288);
        const ccdm::MatcherCodebook cb(comp);
        os << "# dm id=" << dist.id << " n=" << cb.output_length() << " k=" << cb.input_bits()
           << " counts=";
        for (std::size_t i = 0; i < comp.counts.size(); ++i)
            os << (i ? "," : "") << comp.counts[i];
        os << "\n";
    }
    os << "distribution,snr_db,entropy_bits,rate_bits,net_rate_gbps,mi_bits,gmi_bits,ber,fer,"
          "frames,seed,code_hash\n";
    char hash_buf[24];
    for (const auto& r : records) {
        std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                      static_cast<unsigned long long>(r.code_hash));
        os << r.distribution_id << ',' << fmt_double(r.snr_db) << ','
           << fmt_double(r.entropy_bits) << ',' << fmt_double(r.rate_bits) << ','
           << fmt_double(r.net_rate_gbps) << ',' << fmt_double(r.mi_bits) << ','
           << fmt_double(r.gmi_bits) << ',' << (r.ber ? fmt_double(*r.ber) : "") << ','
           << (r.fer ? fmt_double(*r.fer) : "") << ',' << r.frames << ',' << r.seed << ','
           << hash_buf << "\n";
    }
}

void write_json(std::ostream& os, const std::vector<SimulationRecord>& records,
                const SweepConfig& cfg) {
    nlohmann::json j;
    j["schema"] = kSchemaVersion;
    j["tool_version"] = kVersion;
    j["config"] = {
        {"seed", cfg.seed},
        {"frames", cfg.frames},
        {"mi_samples", cfg.mi_samples},
        {"baud_ghz", cfg.baud_ghz},
        {"polarizations", cfg.polarizations},
        {"mi_only", cfg.mi_only || cfg.frames == 0},
        {"code_rate", std::to_string(cfg.code_rate.num) + "/" + std::to_string(cfg.code_rate.den)},
    };
    j["distributions"] = nlohmann::json::array();
    for (const auto& dist : cfg.distributions) {
        const auto comp = dm_composition(dist.constellation, 288);
        const ccdm::MatcherCodebook cb(comp);
        j["distributions"].push_back({{"id", dist.id},
                                      {"dm_n", cb.output_length()},
                                      {"dm_k", cb.input_bits()},
                                      {"dm_counts", comp.counts}});
    }
    j["records"] = nlohmann::json::array();
    char hash_buf[24];
    for (const auto& r : records) {
        std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                      static_cast<unsigned long long>(r.code_hash));
        nlohmann::json rec = {
            {"distribution", r.distribution_id},
            {"snr_db", r.snr_db},
            {"entropy_bits", r.entropy_bits},
            {"rate_bits", r.rate_bits},
            {"net_rate_gbps", r.net_rate_gbps},
            {"mi_bits", r.mi_bits},
            {"gmi_bits", r.gmi_bits},
            {"frames", r.frames},
            {"seed", r.seed},
            {"code_hash", hash_buf},
        };
        rec["ber"] = r.ber ? nlohmann::json(*r.ber) : nlohmann::json(nullptr);
        rec["fer"] = r.fer ? nlohmann::json(*r.fer) : nlohmann::json(nullptr);
        j["records"].push_back(std::move(rec));
    }
    os << j.dump(2) << "\n";
}

std::vector<RateRow> rate_table(double baud_ghz, int polarizations) {
    std::vector<RateRow> rows;
    const shaping::Preset shaped[] = {shaping::Preset::p1, shaping::Preset::p2,
                                      shaping::Preset::p3, shaping::Preset::p4};
    for (int i = 0; i < 4; ++i) {
        const auto op = shaping::operating_point(shaped[i], baud_ghz, polarizations);
        rows.push_back({"OP" + std::to_string(i + 1), "PS-64QAM", 20.0, op.entropy_bits,
                        op.info_rate_bits, op.net_rate_gbps});
    }
    {
        const auto op = shaping::operating_point(shaping::Preset::uniform, baud_ghz, polarizations);
        rows.push_back({"uniform", "64QAM", 20.0, op.entropy_bits, op.info_rate_bits,
                        op.net_rate_gbps});
    }
    // fixed-QAM references at their published overheads: R = m / (1 + OH)
    struct Ref {
        const char* label;
        const char* scheme;
        int m;
        int oh_percent;
    };
    const Ref refs[] = {{"Ref1", "64QAM", 6, 28},
                        {"Ref2", "64QAM", 6, 43},
                        {"Ref3", "16QAM", 4, 11},
                        {"Ref4", "16QAM", 4, 28}};
    for (const auto& ref : refs) {
        const shaping::CodeRate c{100, 100 + ref.oh_percent};
        const double rate = shaping::info_rate_bits(ref.m, c, ref.m);
        rows.push_back({ref.label, ref.scheme, static_cast<double>(ref.oh_percent),
                        static_cast<double>(ref.m), rate, rate * baud_ghz * polarizations});
    }
    return rows;
}

void write_rate_table_csv(std::ostream& os, const std::vector<RateRow>& rows) {
    os << "label,scheme,overhead_percent,entropy_bits,rate_bits,net_rate_gbps\n";
    for (const auto& r : rows)
        os << r.label << ',' << r.scheme << ',' << fmt_double(r.overhead_percent) << ','
           << fmt_double(r.entropy_bits) << ',' << fmt_double(r.rate_bits) << ','
           << fmt_double(r.net_rate_gbps) << "\n";
}

void write_rate_table_text(std::ostream& os, const std::vector<RateRow>& rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %-9s %9s %8s %12s %12s\n", "label", "scheme", "OH[%]",
                  "H[bits]", "R[bits/sym]", "net[Gbit/s]");
    os << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-8s %-9s %9.1f %8.3f %12.4f %12.2f\n", r.label.c_str(),
                      r.scheme.c_str(), r.overhead_percent, r.entropy_bits, r.rate_bits,
                      r.net_rate_gbps);
        os << line;
    }
}

}  // namespace psqam::sweep
