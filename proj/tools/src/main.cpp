#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecoop/oracle.hpp"
#include "documents.hpp"
#include "scenario_io.hpp"

namespace {

using ecoop::BatchOutcome;
using ecoop::Model;
using nlohmann::json;

constexpr int kVerifyDepth = 4;
constexpr double kVerifyRelTol = 1e-4;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write '" + path + "'");
  f << text;
}

int run_solve(const std::string& file, const std::string& out) {
  ecoop::io::ScenarioInput in = ecoop::io::load_scenario_file(file);
  ecoop::io::SolveDocument doc = ecoop::io::solve_document(in);
  doc.body["verified"] = doc.verified;
  const std::string text = doc.body.dump(2) + "\n";
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text(out, text);
  }
  if (!doc.verified) {
    std::fputs("verification failed\n", stderr);
    return 2;
  }
  return 0;
}

int run_region(const std::string& file, const std::string& out,
               const std::string& svg) {
  ecoop::io::ScenarioInput in = ecoop::io::load_scenario_file(file);
  auto region = ecoop::io::trace_for(in);
  const std::string csv = ecoop::io::region_csv(region);
  if (out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_text(out, csv);
  }
  if (!svg.empty()) {
    ecoop::io::ScenarioInput base = in;
    base.scenario.alpha = 0.0;
    auto baseline = ecoop::io::trace_for(base);
    const char* title = in.scenario.model == Model::Mac
                            ? "Multiple-access capacity region"
                            : "Two-way capacity region";
    write_text(svg, ecoop::io::region_svg(region, baseline, title));
  }
  return 0;
}

int run_recheck(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in '" + path +
                                "': " + e.what());
  }
  auto mismatches = ecoop::io::recheck_document(doc);
  if (mismatches.empty()) {
    std::puts("recheck: all stored outcomes reproduce");
    return 0;
  }
  for (const auto& m : mismatches) {
    std::printf("recheck: %s\n", m.c_str());
  }
  return 2;
}

int run_verify(unsigned seed, int count) {
  // Fan the three model batches out to worker tasks; assemble in fixed order.
  auto task = [seed, count](Model m) {
    return ecoop::verify_batch(seed, count, m, kVerifyDepth, kVerifyRelTol);
  };
  auto frelay = std::async(std::launch::async, task, Model::Relay);
  auto ftwoway = std::async(std::launch::async, task, Model::TwoWay);
  auto fmac = std::async(std::launch::async, task, Model::Mac);
  struct Row {
    const char* name;
    BatchOutcome out;
  } rows[] = {{"relay", frelay.get()},
              {"twoway", ftwoway.get()},
              {"mac", fmac.get()}};
  bool all_pass = true;
  for (const auto& r : rows) {
    std::printf("%s: %d/%d pass, worst oracle gap %.3e\n", r.name,
                r.out.passes, r.out.instances, r.out.worst_gap);
    for (const auto& note : r.out.failure_notes) {
      std::printf("  %s\n", note.c_str());
    }
    all_pass = all_pass && r.out.failures == 0;
  }
  std::printf("%s\n", all_pass ? "all suites passed" : "FAILURES detected");
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Offline-optimal power scheduling and wireless energy transfer for "
      "energy-harvesting relay, two-way, and multiple-access networks"};
  app.require_subcommand(1);

  std::string solve_file, solve_out;
  auto* solve = app.add_subcommand(
      "solve", "Solve a scenario file and emit a result document");
  solve->add_option("file", solve_file, "scenario JSON file")->required();
  solve->add_option("--out", solve_out, "write the document here");

  std::string region_file, region_out, region_svg;
  auto* region = app.add_subcommand(
      "region", "Trace the capacity-region boundary as CSV");
  region->add_option("file", region_file, "scenario JSON file")->required();
  region->add_option("--out", region_out, "write the CSV here");
  region->add_option("--svg", region_svg, "also plot the region here");

  unsigned seed = 1;
  int count = 10;
  std::string recheck_path;
  auto* verify = app.add_subcommand(
      "verify", "Run the seeded solver-vs-oracle and property suites");
  verify->add_option("--seed", seed, "base RNG seed");
  verify->add_option("--count", count, "instances per model");
  verify->add_option("--recheck", recheck_path,
                     "re-ingest a result document instead");

  std::string demo_name;
  auto* demo =
      app.add_subcommand("demo", "Print an embedded example scenario");
  demo->add_option("name", demo_name, "relay | twoway | twoway-region | mac-region")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve->parsed()) return run_solve(solve_file, solve_out);
    if (region->parsed()) return run_region(region_file, region_out, region_svg);
    if (verify->parsed()) {
      return recheck_path.empty() ? run_verify(seed, count)
                                  : run_recheck(recheck_path);
    }
    if (demo->parsed()) {
      std::fputs((ecoop::io::demo_fixture(demo_name).dump(2) + "\n").c_str(),
                 stdout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
