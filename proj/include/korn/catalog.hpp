#pragma once

#include <optional>
#include <string>
#include <vector>

#include "korn/classify.hpp"
#include "korn/symbol.hpp"

namespace korn {

/// Flags a catalog entry is known to have. Unset fields make no claim.
struct ExpectedFlags {
  std::optional<int> rank;
  std::optional<bool> constant_rank;
  std::optional<bool> elliptic;
  std::optional<bool> elliptic_system;
  std::optional<bool> maximal_rank;
  std::optional<bool> canceling;
};

struct CatalogEntry {
  std::string name;         ///< canonical reference, e.g. "sym_gradient(3)"
  OperatorSpec spec;
  ExpectedFlags expected;
  std::string basis_note;   ///< how V and W are coordinatised
};

struct CatalogInfo {
  std::string name;
  std::vector<std::string> params;
  std::string description;
};

/// Names accepted by make_catalog_operator, with parameter lists.
const std::vector<CatalogInfo>& catalog_names();
const std::vector<CatalogInfo>& annihilator_names();

/// Build an entry by name. "adjoint_of:<name>" builds the formal adjoint of another
/// entry. Throws ConfigError for unknown names or invalid parameters.
CatalogEntry make_catalog_operator(const std::string& name, const std::vector<int>& params);

/// Parse "name", "name(p1,p2)" or "adjoint_of:name(p)"; an optional "catalog:" prefix
/// is ignored.
CatalogEntry catalog_operator(const std::string& ref);

AnnihilatorPair catalog_annihilator(const std::string& name, const std::vector<int>& params);
AnnihilatorPair catalog_annihilator(const std::string& ref);

/// Split a reference into name and integer parameters.
void parse_ref(const std::string& ref, std::string& name, std::vector<int>& params);

/// The entries used for the classification golden table.
std::vector<CatalogEntry> golden_catalog();
/// Golden entries whose expected flags say maximal rank, restricted to dimension n.
std::vector<CatalogEntry> maximal_rank_catalog(int n);

/// Returns a description of every mismatch between `c` and `e`; empty if none.
std::vector<std::string> flag_mismatches(const ExpectedFlags& e, const Classification& c);

/// Increasing index sets of size l from {0..n-1}, lexicographic.
std::vector<std::vector<int>> form_basis(int n, int l);

}  // namespace korn
