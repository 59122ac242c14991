#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oracle.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    std::exit(1);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int report(const oracle::Verdict& v) {
  std::cout << (v.pass ? "PASS" : "FAIL");
  if (!v.detail.empty()) std::cout << ": " << v.detail;
  std::cout << "\n";
  return v.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"independent recheck of certificates and traces"};
  app.require_subcommand(1);

  std::string file;
  std::string class_literal;
  std::size_t count = 32;

  auto* cert = app.add_subcommand("verify-cert", "recheck a certificate file");
  cert->add_option("file", file, "certificate JSON")->required();

  auto* trace = app.add_subcommand("verify-trace", "recheck a reduction trace file");
  trace->add_option("file", file, "trace JSON")->required();

  auto* clique = app.add_subcommand(
      "clique2", "search a class for an all-color-2 parity triple");
  clique->add_option("--class", class_literal, "class literal")->required();
  clique->add_option("--count", count, "members to scan");

  auto* census = app.add_subcommand(
      "components", "two-block parity census over class members");
  census->add_option("--class", class_literal, "class literal")->required();
  census->add_option("--sample", count, "members to sample");

  CLI11_PARSE(app, argc, argv);

  if (cert->parsed()) return report(oracle::verify_certificate_text(slurp(file)));
  if (trace->parsed()) return report(oracle::verify_trace_text(slurp(file)));
  if (clique->parsed()) return report(oracle::clique2_scan(class_literal, count));
  return report(oracle::component_census(class_literal, count));
}
