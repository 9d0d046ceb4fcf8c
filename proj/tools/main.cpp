#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "checks.hpp"
#include "config.hpp"
#include "report.hpp"
#include "schemas.hpp"

namespace {

using namespace msk;

int thread_count(int flag) {
  if (const char* env = std::getenv("MSK_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::ConfigError, std::string("MSK_THREADS must be a positive integer, got \"") + env + "\"");
  }
  if (flag > 0) return flag;
  return std::max(1u, std::thread::hardware_concurrency());
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ConfigError, "cannot write " + path);
  out << text;
}

int run(const std::string& config_path, bool strict, const std::string& fields_path, int threads) {
  const cli::RunConfig config = cli::load_config(config_path);
  const cli::RunResult result = cli::run_checks(config, thread_count(threads));

  if (config.output.format == "csv") {
    std::ostringstream out;
    cli::write_report_csv(out, result);
    emit(config.output.path, out.str());
  } else {
    emit(config.output.path, cli::dump_json(cli::report_json(config, result)));
  }
  if (!fields_path.empty()) {
    std::ostringstream out;
    cli::write_fields_csv(out, result);
    emit(fields_path, out.str());
  }

  bool all = true;
  for (const cli::CheckResult& r : result.checks) {
    all = all && r.pass;
    std::cerr << (r.pass ? "pass " : "FAIL ") << r.id << "  max_residual=" << cli::format_number(r.max_residual)
              << " tolerance=" << cli::format_number(r.tolerance) << " n_points=" << r.n_points
              << (r.skipped ? " (skipped)" : "") << '\n';
  }
  return (strict && !all) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minkowski surface geometry: curvature pipeline and property checks"};
  app.require_subcommand(1);

  std::string config_path, fields_path;
  bool strict = false;
  int threads = 0;
  CLI::App* run_cmd = app.add_subcommand("run", "evaluate the configured checks over the grid");
  run_cmd->add_option("--config", config_path, "JSON run configuration")->required();
  run_cmd->add_flag("--strict", strict, "exit 1 when a check fails");
  run_cmd->add_option("--fields", fields_path, "write the per-point field table (CSV) here");
  run_cmd->add_option("--threads", threads, "worker threads (MSK_THREADS overrides)");

  CLI::App* list_cmd = app.add_subcommand("list-checks", "print the check registry");

  bool config_schema = false;
  CLI::App* schema_cmd = app.add_subcommand("schema", "print the report JSON schema");
  schema_cmd->add_flag("--config", config_schema, "print the configuration schema instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*list_cmd) {
      for (const cli::CheckInfo& c : cli::check_registry()) std::cout << c.id << '\t' << c.statement << '\n';
      return 0;
    }
    if (*schema_cmd) {
      std::cout << (config_schema ? cli::config_schema : cli::report_schema);
      return 0;
    }
    return run(config_path, strict, fields_path, threads);
  } catch (const Error& e) {
    std::cerr << "msk: " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "msk: " << e.what() << '\n';
    return 3;
  }
}
