// Command-line front end: fci / synth / vqe / scan subcommands over a shared
// reproducible configuration.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tivqe/vqe.hpp"

namespace {

struct RunConfig {
  std::string fcidump_path;
  std::vector<int> freeze;
  std::vector<int> drop;
  int hfplus = 0;
  int trotter_order = 1;
  int trotter_steps = 1;
  std::string mode = "exact";
  long shots = 1000;
  std::string spam;  // "e0,e1"
  long spam_char_shots = 4000;
  uint64_t seed = 1;
  std::string out_dir = ".";
  std::string grid;  // "lo:hi:n[;lo:hi:n...]"
  bool no_xx_conversion = false;

  uint64_t digest() const {
    std::ostringstream os;
    os << fcidump_path << '|' << hfplus << '|' << trotter_order << '|' << trotter_steps
       << '|' << mode << '|' << shots << '|' << spam << '|' << seed << '|' << grid
       << '|' << no_xx_conversion;
    for (int f : freeze) os << "|f" << f;
    for (int d : drop) os << "|d" << d;
    uint64_t h = 1469598103934665603ULL;
    for (char c : os.str()) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

tivqe::SpinOrbitalHamiltonian load_problem(const RunConfig& cfg) {
  auto ham = tivqe::parse_fcidump(read_file(cfg.fcidump_path));
  if (!cfg.freeze.empty() || !cfg.drop.empty())
    ham = tivqe::select_orbitals(ham, cfg.freeze, cfg.drop);
  return ham;
}

std::optional<tivqe::SpamModel> spam_of(const RunConfig& cfg, int n_qubits) {
  if (cfg.spam.empty()) return std::nullopt;
  double e0, e1;
  if (std::sscanf(cfg.spam.c_str(), "%lf,%lf", &e0, &e1) != 2)
    throw std::runtime_error("--spam expects e0,e1");
  return tivqe::SpamModel::uniform(n_qubits, e0, e1, cfg.spam_char_shots);
}

tivqe::SampledOptions sampled_of(const RunConfig& cfg, int n_qubits) {
  tivqe::SampledOptions s;
  s.shots_per_basis = cfg.shots;
  s.spam = spam_of(cfg, n_qubits);
  s.seed = cfg.seed;
  return s;
}

nlohmann::json provenance(const RunConfig& cfg) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["config_digest"] = cfg.digest();
  return j;
}

std::vector<std::vector<double>> parse_grid(const std::string& text, int n_params) {
  std::vector<std::vector<double>> grid;
  std::istringstream axes(text);
  std::string axis;
  while (std::getline(axes, axis, ';')) {
    double lo, hi;
    int n;
    if (std::sscanf(axis.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1)
      throw std::runtime_error("grid axis must be lo:hi:n");
    std::vector<double> vals;
    for (int k = 0; k < n; ++k)
      vals.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
    grid.push_back(vals);
  }
  if (static_cast<int>(grid.size()) == 1 && n_params > 1)
    grid.assign(static_cast<size_t>(n_params), grid.front());
  if (static_cast<int>(grid.size()) != n_params)
    throw std::runtime_error("grid covers " + std::to_string(grid.size()) +
                             " parameters, ansatz has " + std::to_string(n_params));
  return grid;
}

int cmd_fci(const RunConfig& cfg) {
  const auto ham = load_problem(cfg);
  const uint64_t ref = ham.hartree_fock_reference();
  nlohmann::json j = provenance(cfg);
  j["hf_energy_ha"] = tivqe::hf_energy(ham, ref);
  const auto fci = tivqe::fci_ground_state(ham);
  j["fci_energy_ha"] = fci.energy;
  j["correlation_mha"] = 1000.0 * (fci.energy - j["hf_energy_ha"].get<double>());
  const std::string text = j.dump(2);
  std::cout << text << "\n";
  write_file(cfg.out_dir + "/fci.json", text);
  return 0;
}

tivqe::CompiledAnsatz compile_from(const RunConfig& cfg,
                                   const tivqe::SpinOrbitalHamiltonian& ham) {
  const uint64_t ref = ham.hartree_fock_reference();
  const auto fci = tivqe::fci_ground_state(ham);
  const auto ranked =
      tivqe::rank_excitations(fci, ref, static_cast<size_t>(cfg.hfplus), ham.n_spatial());
  const auto spec = tivqe::build_ucc_ansatz(ranked, static_cast<size_t>(cfg.hfplus),
                                            ham.n_spatial(), ref);
  tivqe::AssembleOptions opts;
  opts.convert_to_xx = !cfg.no_xx_conversion;
  return tivqe::compile_ansatz(
      spec, ham, tivqe::TrotterConfig{cfg.trotter_order, cfg.trotter_steps}, opts);
}

int cmd_synth(const RunConfig& cfg) {
  const auto ham = load_problem(cfg);
  const auto ca = compile_from(cfg, ham);
  const auto counts = tivqe::count_gates(ca.circuit);
  nlohmann::json j = provenance(cfg);
  j["n_qubits"] = ca.circuit.n_qubits;
  j["cnot"] = counts.cnot;
  j["xx_small_angle"] = counts.xx_small_angle;
  j["entangling_total"] = counts.entangling_total();
  j["single_qubit"] = counts.single_qubit;
  std::cout << j.dump(2) << "\n";
  write_file(cfg.out_dir + "/circuit.txt", tivqe::to_text(ca.circuit));
  write_file(cfg.out_dir + "/circuit.json", tivqe::to_json(ca.circuit));
  write_file(cfg.out_dir + "/ansatz.json", ca.spec.to_json());
  write_file(cfg.out_dir + "/gate_counts.json", j.dump(2));
  return 0;
}

int cmd_vqe(const RunConfig& cfg) {
  const auto ham = load_problem(cfg);
  const auto ca = compile_from(cfg, ham);
  const auto mode = cfg.mode == "exact" ? tivqe::EvalMode::Exact : tivqe::EvalMode::Sampled;
  const auto run = tivqe::minimize(ca, mode, sampled_of(cfg, ca.circuit.n_qubits));
  nlohmann::json j = provenance(cfg);
  j["energy_ha"] = run.best_energy;
  j["sigma_ha"] = run.best_sigma;
  j["theta"] = run.best_theta;
  j["evaluations"] = run.evaluations;
  j["converged"] = run.converged;
  if (!run.converged) std::cerr << "warning: evaluation cap reached, best-so-far returned\n";
  const std::string text = j.dump(2);
  std::cout << text << "\n";
  write_file(cfg.out_dir + "/vqe.json", text);
  write_file(cfg.out_dir + "/trace.csv", tivqe::scan_to_csv(run.trace));
  return 0;
}

int cmd_scan(const RunConfig& cfg) {
  const auto ham = load_problem(cfg);
  const auto ca = compile_from(cfg, ham);
  const auto mode = cfg.mode == "exact" ? tivqe::EvalMode::Exact : tivqe::EvalMode::Sampled;
  const auto grid = parse_grid(cfg.grid, ca.spec.n_parameters);
  const auto rows = tivqe::scan_surface(ca, grid, mode, sampled_of(cfg, ca.circuit.n_qubits));
  const std::string csv = tivqe::scan_to_csv(rows);
  std::cout << csv;
  write_file(cfg.out_dir + "/scan.csv", csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VQE compiler and simulator for a trapped-ion gate set"};
  app.set_config("--config", "", "key=value configuration file");
  RunConfig cfg;
  app.add_option("--fcidump", cfg.fcidump_path, "molecular integrals file")
      ->configurable(true);
  app.add_option("--freeze", cfg.freeze, "doubly occupied MOs folded into the core");
  app.add_option("--drop", cfg.drop, "empty MOs removed from the problem");
  app.add_option("--hfplus", cfg.hfplus, "number of ansatz terms (HF+N)");
  app.add_option("--trotter-order", cfg.trotter_order, "product-formula order");
  app.add_option("--trotter-steps", cfg.trotter_steps, "product-formula steps");
  app.add_option("--mode", cfg.mode, "exact | sampled");
  app.add_option("--shots", cfg.shots, "shots per measurement basis");
  app.add_option("--spam", cfg.spam, "readout error rates e0,e1");
  app.add_option("--spam-char-shots", cfg.spam_char_shots,
                 "characterization shots per confusion entry");
  app.add_option("--seed", cfg.seed, "random seed recorded in every output");
  app.add_option("--out", cfg.out_dir, "output directory");
  app.add_option("--grid", cfg.grid, "scan grid lo:hi:n[;lo:hi:n...]");
  app.add_flag("--no-xx-conversion", cfg.no_xx_conversion,
               "keep CNOTs instead of small-angle XX gates");

  app.require_subcommand(1);
  auto* fci = app.add_subcommand("fci", "reference HF and FCI energies");
  auto* synth = app.add_subcommand("synth", "compile the HF+N ansatz circuit");
  auto* vqe = app.add_subcommand("vqe", "minimize the HF+N energy");
  auto* scan = app.add_subcommand("scan", "energy surface over a theta grid");

  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(cfg.out_dir);
    if (fci->parsed()) return cmd_fci(cfg);
    if (synth->parsed()) return cmd_synth(cfg);
    if (vqe->parsed()) return cmd_vqe(cfg);
    if (scan->parsed()) return cmd_scan(cfg);
  } catch (const tivqe::FcidumpError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
