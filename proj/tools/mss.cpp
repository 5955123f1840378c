#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mss/api.hpp"
#include "mss/artifact.hpp"
#include "mss/config.hpp"
#include "mss/experiment.hpp"
#include "mss/http_server.hpp"
#include "mss/ingest.hpp"
#include "mss/sbm.hpp"

namespace {

mss::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int run_build(const std::string& path, const std::optional<std::uint64_t>& seed,
              const std::optional<std::uint32_t>& epochs, const std::optional<std::string>& output) {
  mss::BuildConfig cfg = mss::load_build_config(path);
  mss::apply_env_overrides(cfg, mss::process_env());
  if (seed) cfg.seed = *seed;
  if (epochs) cfg.embed.doc.epochs = *epochs;
  if (output) cfg.output = *output;
  const auto manifest = mss::cmd_build(cfg);
  const auto& c = manifest["counts"];
  std::cout << "wrote " << cfg.output << ": " << c["buckets"] << " buckets, " << c["intervals"] << " intervals, "
            << c["embedding_records"] << " embedding records, " << c["indexed_records"] << " indexed\n";
  if (c["parse_errors"].get<std::size_t>() > 0)
    std::cerr << "warning: skipped " << c["parse_errors"] << " malformed input lines\n";
  return 0;
}

int run_eval(const std::string& path, const std::string& out, const std::optional<std::uint64_t>& seed,
             const std::optional<std::uint32_t>& epochs, const std::optional<std::uint32_t>& runs) {
  mss::EvalConfig cfg = mss::load_eval_config(path);
  mss::apply_env_overrides(cfg, mss::process_env());
  if (seed) cfg.experiment.seed = *seed;
  if (epochs) cfg.experiment.doc.epochs = *epochs;
  if (runs) cfg.experiment.runs = *runs;
  cfg.validate();

  mss::DynamicGraph dg;
  if (cfg.input) {
    std::ifstream in(*cfg.input);
    if (!in) throw std::runtime_error("cannot read input '" + *cfg.input + "'");
    const auto parsed = mss::parse_edge_stream(in, cfg.schema);
    dg = mss::bucket_by_hour(parsed.edges, cfg.bucket_width);
  } else {
    dg = mss::synth_dynamic_sbm(cfg.sbm);
  }
  const auto table = mss::run_accuracy_experiment(dg, cfg.experiment, cfg.dataset);
  std::ofstream csv(out);
  if (!csv) throw std::runtime_error("cannot write '" + out + "'");
  csv << table.to_csv();
  std::cout << table.to_text();
  return 0;
}

int run_serve(const std::string& dir, const std::string& host, int port, const std::string& origin, int ttl) {
  const auto artifact = mss::Artifact::load(dir);
  mss::Api api(*artifact, std::chrono::seconds(ttl));
  mss::HttpServer server(api, origin);
  const int bound = server.bind(host, port);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "serving " << dir << " on http://" << host << ":" << bound << "\n" << std::flush;
  const bool ok = server.run();
  g_server = nullptr;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale snapshot engine for dynamic graphs"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "Build an artifact directory from an edge list");
  std::string build_config;
  std::optional<std::uint64_t> build_seed;
  std::optional<std::uint32_t> build_epochs;
  std::optional<std::string> build_output;
  build->add_option("--config", build_config, "JSON build config")->required()->check(CLI::ExistingFile);
  build->add_option("--seed", build_seed, "Master seed");
  build->add_option("--epochs", build_epochs, "Document embedding epochs");
  build->add_option("--output", build_output, "Output directory");

  auto* eval = app.add_subcommand("eval", "Run the window-query accuracy benchmark");
  std::string eval_config, eval_out = "table.csv";
  std::optional<std::uint64_t> eval_seed;
  std::optional<std::uint32_t> eval_epochs, eval_runs;
  eval->add_option("--config", eval_config, "JSON eval config")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", eval_out, "CSV output path");
  eval->add_option("--seed", eval_seed, "Master seed");
  eval->add_option("--epochs", eval_epochs, "Document embedding epochs");
  eval->add_option("--runs", eval_runs, "Repetitions per interval length");

  auto* serve = app.add_subcommand("serve", "Serve an artifact over HTTP");
  std::string artifact_dir, host = "127.0.0.1", origin = "*";
  int port = 8080, ttl = 1800;
  serve->add_option("--artifact", artifact_dir, "Artifact directory")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--origin", origin, "Allowed CORS origin");
  serve->add_option("--session-ttl", ttl, "Idle session lifetime in seconds");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*build) return run_build(build_config, build_seed, build_epochs, build_output);
    if (*eval) return run_eval(eval_config, eval_out, eval_seed, eval_epochs, eval_runs);
    if (*serve) return run_serve(artifact_dir, host, port, origin, ttl);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
