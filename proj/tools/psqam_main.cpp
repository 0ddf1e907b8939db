#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psqam/fec.hpp"
#include "psqam/sweep.hpp"
#include "psqam/version.hpp"

namespace {

std::vector<double> parse_snr_range(const std::string& spec) {
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !is.eof())
        throw CLI::ValidationError("--snr-range", "expected start:stop:step, got '" + spec + "'");
    if (!(step > 0)) throw CLI::ValidationError("--snr-range", "step must be positive");
    if (stop < start) throw CLI::ValidationError("--snr-range", "stop must be >= start");
    std::vector<double> out;
    for (int i = 0;; ++i) {
        const double v = start + i * step;
        if (v > stop + 1e-9) break;
        out.push_back(v);
    }
    return out;
}

int write_or_print(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return 0;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        std::cerr << "error: cannot open output file '" << out_path << "'\n";
        return 1;
    }
    os << payload;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"probabilistically shaped 64-QAM link simulator"};
    app.set_version_flag("--version", std::string("psqam ") + psqam::kVersion + " (schema " +
                                          std::to_string(psqam::kSchemaVersion) + ")");
    app.set_config("--config", "", "read options from an INI-style config file");
    app.allow_config_extras(CLI::config_extras_mode::error);  // unknown keys are fatal

    std::vector<std::string> presets;
    app.add_option("--preset,-d", presets,
                   "distribution under test: uniform, P1..P4, or nu:<value> (repeatable)");

    std::vector<double> snrs;
    app.add_option("--snr", snrs, "SNR grid point in dB, Es/N0 (repeatable)");
    std::string snr_range;
    app.add_option("--snr-range", snr_range, "SNR grid as start:stop:step in dB");

    psqam::sweep::SweepConfig cfg;
    app.add_option("--frames", cfg.frames, "full-chain frames per grid point (0 = metrics only)")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    app.add_option("--mi-samples", cfg.mi_samples, "Monte-Carlo draws for the GMI estimate")
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "worker threads over sweep points")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--baud", cfg.baud_ghz, "symbol rate in GBaud")->capture_default_str();
    app.add_option("--pol", cfg.polarizations, "polarization count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--max-iters", cfg.max_iterations, "decoder iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--mi-only", cfg.mi_only, "skip the FEC chain; emit MI/GMI only");

    std::string out_path, format;  // empty = mode default (sweep: csv, table: text)
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    bool rate_table = false;
    app.add_flag("--rate-table", rate_table,
                 "emit the operating-point table (shaped presets vs fixed-QAM references)");
    std::string pcm_path;
    app.add_option("--export-pcm", pcm_path,
                   "write the parity-check matrix in sparse text form and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!pcm_path.empty()) {
            const auto code = psqam::fec::CodeDefinition::build();
            return write_or_print(pcm_path, code.export_sparse());
        }
        if (rate_table) {
            const auto rows = psqam::sweep::rate_table(cfg.baud_ghz, cfg.polarizations);
            std::ostringstream os;
            if (format == "csv")
                psqam::sweep::write_rate_table_csv(os, rows);
            else
                psqam::sweep::write_rate_table_text(os, rows);  // default: aligned text
            return write_or_print(out_path, os.str());
        }

        if (!snr_range.empty()) {
            const auto pts = parse_snr_range(snr_range);
            snrs.insert(snrs.end(), pts.begin(), pts.end());
        }
        if (snrs.empty()) {
            std::cerr << "error: no SNR points; pass --snr and/or --snr-range (or --rate-table)\n";
            return 1;
        }
        if (presets.empty()) presets.push_back("uniform");
        for (const auto& token : presets)
            cfg.distributions.push_back(psqam::sweep::DistributionSpec::parse(token));
        cfg.snrs_db = snrs;

        const auto records = psqam::sweep::run_sweep(cfg);
        std::ostringstream os;
        if (format == "json")
            psqam::sweep::write_json(os, records, cfg);
        else
            psqam::sweep::write_csv(os, records, cfg);
        return write_or_print(out_path, os.str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
