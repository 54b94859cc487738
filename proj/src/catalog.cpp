#include "korn/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "korn/error.hpp"

namespace korn {
namespace {

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

MultiIndex unit(int n, int j) {
  MultiIndex a(n, 0);
  a[j] = 1;
  return a;
}

struct Builder {
  int n, dv, dw, k;
  OperatorSpec::Coeffs c;
  Builder(int n_, int dv_, int dw_, int k_) : n(n_), dv(dv_), dw(dw_), k(k_) {}
  void set(const MultiIndex& a, int row, int col, double v) {
    auto it = c.find(a);
    if (it == c.end()) it = c.emplace(a, Eigen::MatrixXd::Zero(dw, dv)).first;
    it->second(row, col) += v;
  }
  OperatorSpec build(std::string name) { return OperatorSpec(n, dv, dw, k, std::move(c), std::move(name)); }
};

std::string ref_name(const std::string& name, const std::vector<int>& p) {
  if (p.empty()) return name;
  std::string s = name + "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

void need(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void need_params(const std::string& name, const std::vector<int>& p, std::size_t lo, std::size_t hi) {
  need(p.size() >= lo && p.size() <= hi,
       name + ": expected " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) +
           " parameter(s), got " + std::to_string(p.size()));
}

constexpr int kMaxN = 6;

void need_n(const std::string& name, int n, int lo = 1) {
  need(n >= lo && n <= kMaxN, name + ": dimension n=" + std::to_string(n) + " out of range [" +
                                  std::to_string(lo) + "," + std::to_string(kMaxN) + "]");
}

// Orthonormal basis of Sym(n): E_ii for diagonals, (E_ij + E_ji)/sqrt2 off the diagonal,
// ordered by pairs (i <= j) lexicographically.
int sym_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  int idx = 0;
  for (int a = 0; a < i; ++a) idx += n - a;
  return idx + (j - i);
}

OperatorSpec sym_gradient(int n) {
  Builder b(n, n, n * (n + 1) / 2, 1);
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      int row = sym_index(n, i, j);
      if (i == j) {
        b.set(unit(n, i), row, i, 1.0);
      } else {
        b.set(unit(n, j), row, i, r2);
        b.set(unit(n, i), row, j, r2);
      }
    }
  return b.build("sym_gradient(" + std::to_string(n) + ")");
}

OperatorSpec deviatoric(int n) {
  int off = n * (n - 1) / 2;
  Builder b(n, n, off + n - 1, 1);
  const double r2 = 1.0 / std::sqrt(2.0);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++row) {
      b.set(unit(n, j), row, i, r2);
      b.set(unit(n, i), row, j, r2);
    }
  // trace-free diagonal part in the Helmert basis diag(1,..,1,-m,0,..)/sqrt(m(m+1))
  for (int m = 1; m < n; ++m, ++row) {
    double s = 1.0 / std::sqrt(static_cast<double>(m) * (m + 1));
    for (int j = 0; j < m; ++j) b.set(unit(n, j), row, j, s);
    b.set(unit(n, m), row, m, -m * s);
  }
  return b.build("deviatoric(" + std::to_string(n) + ")");
}

int perm_sign(std::vector<int> v) {
  int s = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) s = -s;
  return s;
}

// d on l-forms: coefficient of D_j maps e_I to e_j ^ e_I.
OperatorSpec ext_derivative(int n, int l) {
  auto src = form_basis(n, l);
  auto dst = form_basis(n, l + 1);
  Builder b(n, static_cast<int>(src.size()), static_cast<int>(dst.size()), 1);
  for (std::size_t col = 0; col < src.size(); ++col) {
    const auto& I = src[col];
    for (int j = 0; j < n; ++j) {
      if (std::find(I.begin(), I.end(), j) != I.end()) continue;
      std::vector<int> seq{j};
      seq.insert(seq.end(), I.begin(), I.end());
      std::vector<int> J = seq;
      std::sort(J.begin(), J.end());
      auto row = std::find(dst.begin(), dst.end(), J) - dst.begin();
      b.set(unit(n, j), static_cast<int>(row), static_cast<int>(col), perm_sign(seq));
    }
  }
  return b.build("ext_derivative(" + std::to_string(n) + "," + std::to_string(l) + ")");
}

// codifferential from (l+1)-forms to l-forms: symbol is the transpose of d's symbol
// (interior product), so that delta d + d delta has symbol |xi|^2 I.
OperatorSpec codifferential(int n, int l) {
  OperatorSpec t = symbol_transpose(ext_derivative(n, l));
  t.set_name("codifferential(" + std::to_string(n) + "," + std::to_string(l) + ")");
  return t;
}

ExpectedFlags adjoint_flags(const ExpectedFlags& in, const OperatorSpec& inner) {
  ExpectedFlags e;
  e.rank = in.rank;
  e.constant_rank = in.constant_rank;
  e.elliptic_system = in.elliptic_system;
  if (in.elliptic == true) {
    e.maximal_rank = true;
    e.canceling = false;
  }
  if (in.maximal_rank == true && in.rank && *in.rank == inner.dim_w()) e.elliptic = true;
  if (in.maximal_rank == true && in.rank && *in.rank == inner.dim_w() &&
      inner.dim_v() > inner.dim_w())
    e.elliptic_system = false;
  return e;
}

CatalogEntry make_base(const std::string& name, const std::vector<int>& p) {
  CatalogEntry e;
  e.name = ref_name(name, p);
  ExpectedFlags& f = e.expected;
  f.constant_rank = true;
  if (name == "divergence") {
    need_params(name, p, 1, 2);
    int n = p[0], rows = p.size() > 1 ? p[1] : 1;
    need_n(name, n);
    need(rows >= 1 && rows <= 8, name + ": rows must be in [1,8]");
    Builder b(n, rows * n, rows, 1);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < n; ++j) b.set(unit(n, j), i, i * n + j, 1.0);
    e.spec = b.build(e.name);
    e.basis_note = "V: rows x n matrices, row-major; W: R^rows";
    f.rank = rows;
    f.maximal_rank = true;
    f.elliptic = n == 1;
    f.elliptic_system = n == 1;
    f.canceling = false;
  } else if (name == "div_k") {
    need_params(name, p, 2, 2);
    int n = p[0], k = p[1];
    need_n(name, n);
    need(k >= 1 && k <= 4, name + ": k must be in [1,4]");
    auto idx = multi_indices(n, k);
    Builder b(n, static_cast<int>(idx.size()), 1, k);
    for (std::size_t i = 0; i < idx.size(); ++i) b.set(idx[i], 0, static_cast<int>(i), 1.0);
    e.spec = b.build(e.name);
    e.basis_note = "V: one component per multi-index of order k (descending lexicographic)";
    f.rank = 1;
    f.maximal_rank = true;
    f.elliptic = idx.size() == 1;
    f.elliptic_system = idx.size() == 1;
    f.canceling = false;
  } else if (name == "gradient") {
    need_params(name, p, 1, 1);
    int n = p[0];
    need_n(name, n);
    Builder b(n, 1, n, 1);
    for (int j = 0; j < n; ++j) b.set(unit(n, j), j, 0, 1.0);
    e.spec = b.build(e.name);
    f.rank = 1;
    f.elliptic = true;
    f.elliptic_system = n == 1;
    f.maximal_rank = n == 1;
    f.canceling = n >= 2;
  } else if (name == "grad_k") {
    need_params(name, p, 2, 2);
    int n = p[0], k = p[1];
    need_n(name, n);
    need(k >= 1 && k <= 4, name + ": k must be in [1,4]");
    auto idx = multi_indices(n, k);
    Builder b(n, 1, static_cast<int>(idx.size()), k);
    for (std::size_t i = 0; i < idx.size(); ++i) b.set(idx[i], static_cast<int>(i), 0, 1.0);
    e.spec = b.build(e.name);
    e.basis_note = "W: one component D^alpha u per multi-index of order k";
    f.rank = 1;
    f.elliptic = true;
    f.elliptic_system = idx.size() == 1;
    f.maximal_rank = idx.size() == 1;
    f.canceling = idx.size() > 1;
  } else if (name == "laplacian" || name == "bilaplacian") {
    need_params(name, p, 1, 1);
    int n = p[0];
    need_n(name, n);
    Builder b(n, 1, 1, 2);
    for (int j = 0; j < n; ++j) {
      MultiIndex a(n, 0);
      a[j] = 2;
      b.set(a, 0, 0, 1.0);
    }
    OperatorSpec lap = b.build("laplacian(" + std::to_string(n) + ")");
    e.spec = name == "laplacian" ? lap : compose(lap, lap);
    e.spec.set_name(e.name);
    f.rank = 1;
    f.elliptic = true;
    f.elliptic_system = true;
    f.maximal_rank = true;
    f.canceling = false;
  } else if (name == "cauchy_riemann") {
    need_params(name, p, 0, 0);
    // (u, v) -> (u_x - v_y, u_y + v_x)
    Builder b(2, 2, 2, 1);
    b.set({1, 0}, 0, 0, 1.0);
    b.set({0, 1}, 0, 1, -1.0);
    b.set({0, 1}, 1, 0, 1.0);
    b.set({1, 0}, 1, 1, 1.0);
    e.spec = b.build(e.name);
    f.rank = 2;
    f.elliptic = true;
    f.elliptic_system = true;
    f.maximal_rank = true;
    f.canceling = false;
  } else if (name == "sym_gradient") {
    need_params(name, p, 1, 1);
    int n = p[0];
    need_n(name, n);
    e.spec = sym_gradient(n);
    e.basis_note = "W: Sym(n) in the orthonormal basis E_ii, (E_ij+E_ji)/sqrt2, pairs i<=j lexicographic";
    f.rank = n;
    f.elliptic = true;
    f.elliptic_system = n == 1;
    f.maximal_rank = n == 1;
    f.canceling = n >= 2;
  } else if (name == "deviatoric") {
    need_params(name, p, 1, 1);
    int n = p[0];
    need_n(name, n, 2);
    e.spec = deviatoric(n);
    e.basis_note = "W: trace-free Sym(n); off-diagonals (E_ij+E_ji)/sqrt2 then Helmert diagonals";
    f.rank = n;
    f.elliptic = true;
    f.elliptic_system = n == 2;
    f.maximal_rank = n == 2;
    f.canceling = n >= 3;
  } else if (name == "ext_derivative" || name == "codifferential") {
    need_params(name, p, 2, 2);
    int n = p[0], l = p[1];
    need_n(name, n);
    need(l >= 0 && l <= n - 1, name + ": form degree l must satisfy 0 <= l <= n-1");
    bool d = name == "ext_derivative";
    e.spec = d ? ext_derivative(n, l) : codifferential(n, l);
    e.basis_note = "forms in the basis e_I, I increasing, lexicographic";
    f.rank = binom(n - 1, l);
    if (d) {
      f.elliptic = l == 0;
      f.elliptic_system = n == 1;
      f.maximal_rank = l == n - 1;
      f.canceling = l <= n - 2;
    } else {
      f.elliptic = l == n - 1;
      f.elliptic_system = n == 1;
      f.maximal_rank = l == 0;
      f.canceling = l >= 1;
    }
  } else if (name == "laplace_beltrami") {
    need_params(name, p, 2, 2);
    int n = p[0], l = p[1];
    need_n(name, n, 2);
    need(l >= 1 && l <= n - 1, name + ": form degree l must satisfy 1 <= l <= n-1");
    OperatorSpec dd = compose(codifferential(n, l), ext_derivative(n, l));
    OperatorSpec dl = compose(ext_derivative(n, l - 1), codifferential(n, l - 1));
    e.spec = add(dd, dl);
    e.spec.set_name(e.name);
    e.basis_note = "forms in the basis e_I, I increasing, lexicographic";
    f.rank = binom(n, l);
    f.elliptic = true;
    f.elliptic_system = true;
    f.maximal_rank = true;
    f.canceling = false;
  } else {
    throw ConfigError("unknown catalog operator '" + name + "'");
  }
  return e;
}

}  // namespace

std::vector<std::vector<int>> form_basis(int n, int l) {
  std::vector<std::vector<int>> out;
  if (l < 0 || l > n) return out;
  std::vector<int> cur(l);
  for (int i = 0; i < l; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = l - 1;
    while (i >= 0 && cur[i] == n - l + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < l; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

const std::vector<CatalogInfo>& catalog_names() {
  static const std::vector<CatalogInfo> names = {
      {"divergence", {"n", "rows"}, "row-wise divergence of rows x n matrix fields (rows optional, default 1)"},
      {"div_k", {"n", "k"}, "k-th order divergence sum_alpha D^alpha U_alpha"},
      {"gradient", {"n"}, "gradient of a scalar"},
      {"grad_k", {"n", "k"}, "all k-th order partial derivatives of a scalar"},
      {"laplacian", {"n"}, "scalar Laplacian"},
      {"bilaplacian", {"n"}, "scalar bi-Laplacian"},
      {"cauchy_riemann", {}, "(u,v) -> (u_x - v_y, u_y + v_x) in the plane"},
      {"sym_gradient", {"n"}, "symmetric gradient into Sym(n)"},
      {"deviatoric", {"n"}, "trace-free symmetric gradient"},
      {"ext_derivative", {"n", "l"}, "exterior derivative on l-forms"},
      {"codifferential", {"n", "l"}, "codifferential from (l+1)-forms to l-forms"},
      {"laplace_beltrami", {"n", "l"}, "delta d + d delta on l-forms"},
      {"adjoint_of:<name>", {"..."}, "formal adjoint of another entry"},
  };
  return names;
}

const std::vector<CatalogInfo>& annihilator_names() {
  static const std::vector<CatalogInfo> names = {
      {"grad_curl", {"n"}, "(gradient, curl) for n = 2 or 3"},
      {"d_d", {"n", "l"}, "(d on l-forms, d on (l+1)-forms), 0 <= l <= n-2"},
  };
  return names;
}

CatalogEntry make_catalog_operator(const std::string& name, const std::vector<int>& params) {
  const std::string prefix = "adjoint_of:";
  if (name.rfind(prefix, 0) == 0) {
    CatalogEntry inner = make_catalog_operator(name.substr(prefix.size()), params);
    CatalogEntry e;
    e.name = prefix + inner.name;
    e.spec = adjoint(inner.spec);
    e.spec.set_name(e.name);
    e.expected = adjoint_flags(inner.expected, inner.spec);
    e.basis_note = inner.basis_note;
    return e;
  }
  return make_base(name, params);
}

void parse_ref(const std::string& ref_in, std::string& name, std::vector<int>& params) {
  std::string ref;
  for (char ch : ref_in)
    if (!std::isspace(static_cast<unsigned char>(ch))) ref += ch;
  if (ref.rfind("catalog:", 0) == 0) ref = ref.substr(8);
  params.clear();
  auto open = ref.find('(');
  if (open == std::string::npos) {
    name = ref;
    return;
  }
  if (ref.back() != ')') throw ConfigError("malformed operator reference '" + ref_in + "'");
  name = ref.substr(0, open);
  std::string inner = ref.substr(open + 1, ref.size() - open - 2);
  std::size_t pos = 0;
  while (pos < inner.size()) {
    auto comma = inner.find(',', pos);
    std::string tok = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      params.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw ConfigError("");
    } catch (...) {
      throw ConfigError("malformed parameter '" + tok + "' in '" + ref_in + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
}

CatalogEntry catalog_operator(const std::string& ref) {
  std::string name;
  std::vector<int> params;
  parse_ref(ref, name, params);
  return make_catalog_operator(name, params);
}

AnnihilatorPair catalog_annihilator(const std::string& name, const std::vector<int>& p) {
  AnnihilatorPair pair;
  pair.name = ref_name(name, p);
  if (name == "grad_curl") {
    need_params(name, p, 1, 1);
    int n = p[0];
    need(n == 2 || n == 3, "grad_curl: n must be 2 or 3");
    pair.a = make_base("gradient", {n}).spec;
    if (n == 2) {
      // curl w = D_1 w_2 - D_2 w_1
      Builder b(2, 2, 1, 1);
      b.set({1, 0}, 0, 1, 1.0);
      b.set({0, 1}, 0, 0, -1.0);
      pair.q = b.build("curl(2)");
    } else {
      Builder b(3, 3, 3, 1);
      for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        // (curl w)_i = D_j w_k - D_k w_j
        b.set(unit(3, j), i, k, 1.0);
        b.set(unit(3, k), i, j, -1.0);
      }
      pair.q = b.build("curl(3)");
    }
  } else if (name == "d_d") {
    need_params(name, p, 2, 2);
    int n = p[0], l = p[1];
    need_n(name, n, 2);
    need(l >= 0 && l <= n - 2, "d_d: l must satisfy 0 <= l <= n-2");
    pair.a = ext_derivative(n, l);
    pair.q = ext_derivative(n, l + 1);
  } else {
    throw ConfigError("unknown annihilator pair '" + name + "'");
  }
  return pair;
}

AnnihilatorPair catalog_annihilator(const std::string& ref) {
  std::string name;
  std::vector<int> params;
  parse_ref(ref, name, params);
  return catalog_annihilator(name, params);
}

std::vector<CatalogEntry> golden_catalog() {
  std::vector<CatalogEntry> out;
  auto push = [&](const std::string& name, std::vector<int> p) {
    out.push_back(make_catalog_operator(name, p));
  };
  for (int n = 1; n <= 4; ++n) push("divergence", {n});
  push("divergence", {2, 2});
  push("divergence", {3, 3});
  for (int n = 2; n <= 3; ++n)
    for (int k = 1; k <= 3; ++k) push("div_k", {n, k});
  for (int n = 1; n <= 4; ++n) push("gradient", {n});
  for (int n = 2; n <= 3; ++n)
    for (int k = 2; k <= 3; ++k) push("grad_k", {n, k});
  for (int n = 1; n <= 4; ++n) push("laplacian", {n});
  for (int n = 2; n <= 3; ++n) push("bilaplacian", {n});
  push("cauchy_riemann", {});
  for (int n = 2; n <= 4; ++n) push("sym_gradient", {n});
  for (int n = 2; n <= 4; ++n) push("deviatoric", {n});
  for (int n = 2; n <= 4; ++n)
    for (int l = 0; l <= n - 1; ++l) {
      push("ext_derivative", {n, l});
      push("codifferential", {n, l});
      if (l >= 1) push("laplace_beltrami", {n, l});
    }
  // adjoints of the elliptic entries
  push("adjoint_of:gradient", {2});
  push("adjoint_of:gradient", {3});
  push("adjoint_of:grad_k", {2, 2});
  push("adjoint_of:grad_k", {3, 2});
  push("adjoint_of:sym_gradient", {2});
  push("adjoint_of:sym_gradient", {3});
  push("adjoint_of:deviatoric", {2});
  push("adjoint_of:deviatoric", {3});
  push("adjoint_of:cauchy_riemann", {});
  push("adjoint_of:laplacian", {2});
  push("adjoint_of:bilaplacian", {2});
  push("adjoint_of:laplace_beltrami", {3, 1});
  push("adjoint_of:ext_derivative", {3, 0});
  push("adjoint_of:codifferential", {3, 2});
  return out;
}

std::vector<CatalogEntry> maximal_rank_catalog(int n) {
  std::vector<CatalogEntry> out;
  for (auto& e : golden_catalog())
    if (e.spec.n() == n && e.expected.maximal_rank == true) out.push_back(e);
  return out;
}

std::vector<std::string> flag_mismatches(const ExpectedFlags& e, const Classification& c) {
  std::vector<std::string> out;
  auto check = [&](const char* what, const std::optional<bool>& want, bool got) {
    if (want && *want != got)
      out.push_back(std::string(what) + ": expected " + (*want ? "true" : "false") + ", got " +
                    (got ? "true" : "false"));
  };
  if (e.rank && (c.rank_min != *e.rank || c.rank_max != *e.rank))
    out.push_back("rank: expected " + std::to_string(*e.rank) + ", got [" +
                  std::to_string(c.rank_min) + "," + std::to_string(c.rank_max) + "]");
  check("constant_rank", e.constant_rank, c.is_constant_rank);
  check("elliptic", e.elliptic, c.is_elliptic);
  check("elliptic_system", e.elliptic_system, c.is_elliptic_system);
  check("maximal_rank", e.maximal_rank, c.is_maximal_rank);
  check("canceling", e.canceling, c.is_canceling);
  return out;
}

}  // namespace korn
