#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "malab/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"malab: radial Monge-Ampere lab, exterior Poisson solver, quadratic extraction"};
  app.require_subcommand(1);

  std::string config, out = ".";
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "key = value experiment file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (created if missing)");
    return sub;
  };
  auto* radial = add("radial-expand", "radial solution against its truncated expansion");
  auto* poisson = add("poisson", "exterior Poisson solve with decay certificate");
  auto* extract = add("extract", "quadratic and linear terms of an oracle at infinity");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto doc = malab::KeyValueDoc::load(config);
    if (radial->parsed()) return malab::cli::cmd_radial_expand(doc, out);
    if (poisson->parsed()) return malab::cli::cmd_poisson(doc, out);
    if (extract->parsed()) return malab::cli::cmd_extract(doc, out);
  } catch (const malab::CertificationFailure& e) {
    std::cerr << "certificate failed: " << e.what() << '\n';
    return malab::cli::kExitCertificate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return malab::cli::kExitError;
  }
  return malab::cli::kExitError;
}
