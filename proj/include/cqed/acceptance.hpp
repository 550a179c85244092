#pragma once

// Acceptance checks shared by the test suite and `cqed selfcheck`.

#include <functional>
#include <string>
#include <vector>

#include "cqed/fock.hpp"
#include "cqed/wigner.hpp"

namespace cqed::acceptance {

struct NamedState {
  std::string name;
  DensityOperator rho;
  double alpha_max;  // reach of its phase-space features, for the fine grid
};

// vacuum, Fock 1-3, coherent 1 and 2, cats at alpha = 2 with psi = 0 and pi,
// the 50/50 mixture of |2> and |-2>, and the even cat damped for 0.1/kappa.
std::vector<NamedState> corpus();

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Every map built while checking; criterion 4 inspects all of them.
struct MapLedger {
  std::vector<std::pair<std::string, WignerMap>> maps;
  void add(std::string label, WignerMap map) { maps.emplace_back(std::move(label), std::move(map)); }
};

Result direct_identity(MapLedger& ledger);        // 1
Result one_photon_origin(MapLedger& ledger);      // 2
Result construction_agreement();                  // 3
Result bound_and_normalization(MapLedger& ledger);  // 4
Result decoherence_law();                         // 5
Result two_atom_shape();                          // 6
Result tomography(MapLedger& ledger);             // 7
Result pauli_incompleteness();                    // 8
Result efficiency_insensitivity();                // 9
Result moyal_consistency();                       // 10
Result separation_scale();                        // 11

// Runs 1-11 in order (4 last, after the ledger is filled) and returns them sorted by id.
std::vector<Result> run_all(const std::function<void(const Result&)>& on_result = {});

std::string format_line(const Result& r);

}  // namespace cqed::acceptance
