#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mustem/mustem.hpp"

namespace {

struct ToneSpec {
    double freq = 0.0;
    double dur = 0.0;
    double amp = 0.0;
};

ToneSpec parse_tone_spec(const std::string& spec) {
    ToneSpec tone;
    if (std::sscanf(spec.c_str(), "%lf,%lf,%lf", &tone.freq, &tone.dur, &tone.amp) != 3)
        throw std::runtime_error("--tone expects freq,dur,amp (e.g. 383,2,0.8)");
    return tone;
}

mustem::Config load_effective_config(const std::string& path) {
    if (path.empty()) return {};
    return mustem::load_config(path);
}

int cmd_analyze(const std::string& input, const std::string& tone_spec,
                const std::string& config_path, const std::string& frames_dir,
                const std::string& pwm_out, const std::string& analysis_out,
                const std::string& debug_out, const std::string& stats_out,
                const std::string& mode, bool haptics_only, bool visuals_only) {
    if (input.empty() == tone_spec.empty())
        throw std::runtime_error("analyze needs exactly one of --input or --tone");
    if (haptics_only && visuals_only)
        throw std::runtime_error("--haptics-only and --visuals-only are mutually exclusive");

    const mustem::Config cfg = load_effective_config(config_path);

    mustem::PcmClip clip;
    if (!input.empty()) {
        clip = mustem::load_wav(input);
    } else {
        const ToneSpec tone = parse_tone_spec(tone_spec);
        clip = mustem::synth_tone(tone.freq, tone.dur, tone.amp, 44100.0);
    }

    mustem::RunOptions opt;
    opt.haptics = !visuals_only;
    opt.visuals = !haptics_only;
    opt.mode = mode == "realtime" ? mustem::RunMode::realtime : mustem::RunMode::offline;
    if (!frames_dir.empty()) {
        if (!opt.visuals) throw std::runtime_error("--frames requires the visual path");
        std::filesystem::create_directories(frames_dir);
        opt.frame_sink = [&frames_dir](int index, const mustem::FrameBuffer& fb) {
            char name[32];
            std::snprintf(name, sizeof(name), "frame_%06d.ppm", index);
            fb.write_ppm((std::filesystem::path(frames_dir) / name).string());
        };
    }

    const mustem::RunResult result = mustem::run_timeline(clip, cfg, opt);

    if (!pwm_out.empty()) mustem::write_text_file(pwm_out, mustem::pwm_csv(result.pwm));
    if (!analysis_out.empty())
        mustem::write_text_file(analysis_out, mustem::analysis_csv(result.analysis));
    if (!debug_out.empty()) {
        std::string body;
        for (const std::string& line : result.debug_lines) body += line + "\n";
        mustem::write_text_file(debug_out, body);
    }
    if (!stats_out.empty()) mustem::write_text_file(stats_out, mustem::stats_json(result.stats));

    std::cout << mustem::latency_report(result.stats);
    return 0;
}

int cmd_sweep(const std::string& config_path, double from, double to, double step, bool verbose) {
    const mustem::Config cfg = load_effective_config(config_path);
    const mustem::SweepResult result = mustem::run_sweep(cfg, from, to, step);
    std::cout << mustem::sweep_report(result, verbose);
    return result.pass_10hz && result.pass_2hz ? 0 : 1;
}

int cmd_config(const std::string& config_path, const std::string& out_path) {
    const mustem::Config cfg = load_effective_config(config_path);
    const std::string dump = mustem::dump_config(cfg);
    if (out_path.empty())
        std::cout << dump;
    else
        mustem::write_text_file(out_path, dump);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mustem: dual-modality music translation (haptic PWM trace + visual frames)"};
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze", "run both engines over a clip, export traces");
    std::string input, tone_spec, config_path, frames_dir;
    std::string pwm_out, analysis_out, debug_out, stats_out;
    std::string mode = "offline";
    bool haptics_only = false, visuals_only = false;
    analyze->add_option("--input", input, "input WAV file (PCM16 or float32, mono/stereo)");
    analyze->add_option("--tone", tone_spec, "synthesize a test tone instead: freq,dur,amp");
    analyze->add_option("--config", config_path, "key-value config file");
    analyze->add_option("--frames", frames_dir, "directory for frame_%06d.ppm export");
    analyze->add_option("--pwm-out", pwm_out, "PWM trace CSV output path");
    analyze->add_option("--analysis-out", analysis_out, "per-frame analysis CSV output path");
    analyze->add_option("--debug-out", debug_out, "haptic debug-line sidecar output path");
    analyze->add_option("--stats-out", stats_out, "run statistics (JSON) output path");
    analyze->add_option("--mode", mode, "offline (default) or realtime pacing")
        ->check(CLI::IsMember({"offline", "realtime"}));
    analyze->add_flag("--haptics-only", haptics_only, "skip the visual path");
    analyze->add_flag("--visuals-only", visuals_only, "skip the haptic path");

    auto* sweep = app.add_subcommand("sweep", "frequency-detection validation sweep");
    std::string sweep_config;
    double from = 100.0, to = 2000.0, step = 25.0;
    bool verbose = false;
    sweep->add_option("--config", sweep_config, "key-value config file");
    sweep->add_option("--from", from, "sweep start (Hz)");
    sweep->add_option("--to", to, "sweep end (Hz)");
    sweep->add_option("--step", step, "sweep step (Hz)");
    sweep->add_flag("--verbose", verbose, "print one line per tone");

    auto* config_cmd = app.add_subcommand("config", "print the effective configuration");
    std::string cfg_in, cfg_out;
    config_cmd->add_option("--config", cfg_in, "key-value config file to apply first");
    config_cmd->add_option("--out", cfg_out, "write the dump to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed())
            return cmd_analyze(input, tone_spec, config_path, frames_dir, pwm_out, analysis_out,
                               debug_out, stats_out, mode, haptics_only, visuals_only);
        if (sweep->parsed()) return cmd_sweep(sweep_config, from, to, step, verbose);
        if (config_cmd->parsed()) return cmd_config(cfg_in, cfg_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
