#include <cstdio>
#include <sstream>

#include "bilbog/core.hpp"
#include "json.hpp"

namespace bilbog {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* yn(bool b) { return b ? "yes" : "no"; }

ordered_json bound_json(const BoundCheck& b) {
  return ordered_json{{"achieved", b.achieved}, {"bound", b.bound}, {"ok", b.ok}};
}

BoundCheck bound_from(const ordered_json& j) {
  return BoundCheck{j.at("achieved").get<double>(), j.at("bound").get<double>(),
                    j.at("ok").get<bool>()};
}

ordered_json containment_json(const ContainmentRecord& c) {
  ordered_json w = ordered_json::array();
  for (const auto& [x, y] : c.witnesses) w.push_back(ordered_json::array({x, y}));
  return ordered_json{{"holds", c.holds}, {"lhs_size", c.lhs_size}, {"witnesses", w}};
}

ContainmentRecord containment_from(const ordered_json& j) {
  ContainmentRecord c;
  c.holds = j.at("holds").get<bool>();
  c.lhs_size = j.at("lhs_size").get<int64_t>();
  for (const auto& w : j.at("witnesses"))
    c.witnesses.emplace_back(w.at(0).get<size_t>(), w.at(1).get<size_t>());
  return c;
}

ordered_json affine_json(const AffineEndo& a) {
  const Ambient& amb = a.ambient();
  ordered_json rows = ordered_json::array();
  for (uint32_t i = 0; i < amb.n; ++i) {
    ordered_json row = ordered_json::array();
    for (uint32_t j = 0; j < amb.n; ++j) row.push_back(int(a.linear.at(i, j)));
    rows.push_back(std::move(row));
  }
  ordered_json t = ordered_json::array();
  for (uint32_t i = 0; i < amb.n; ++i) t.push_back(int(a.translation.c[i]));
  return ordered_json{{"linear", rows}, {"translation", t}};
}

AffineEndo affine_from(const Ambient& amb, const ordered_json& j) {
  FpMatrix l(amb);
  const auto& rows = j.at("linear");
  for (uint32_t i = 0; i < amb.n; ++i)
    for (uint32_t jj = 0; jj < amb.n; ++jj) l.at(i, jj) = rows.at(i).at(jj).get<uint8_t>();
  std::vector<uint8_t> t;
  for (const auto& d : j.at("translation")) t.push_back(d.get<uint8_t>());
  return AffineEndo(std::move(l), GVector(amb, std::move(t)));
}

ordered_json basis_json(const std::vector<std::vector<uint8_t>>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row = ordered_json::array();
    for (uint8_t d : r) row.push_back(int(d));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<uint8_t>> basis_from(const ordered_json& j) {
  std::vector<std::vector<uint8_t>> out;
  for (const auto& row : j) {
    std::vector<uint8_t> r;
    for (const auto& d : row) r.push_back(d.get<uint8_t>());
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::string certificate_json(const Certificate& cert) {
  ordered_json j;
  j["format"] = "bilbog-certificate/1";
  j["input"] = ordered_json{{"path", cert.input_path}, {"p", cert.p},        {"n", cert.n},
                            {"N", cert.group_size},    {"popcount", cert.popcount},
                            {"density", cert.c}};
  j["config"] = ordered_json{{"seed", cert.seed},
                             {"budget", cert.budget},
                             {"k_cap", cert.k_cap},
                             {"adaptive_t", cert.adaptive_t}};
  j["ef"] = bound_json(cert.ef);
  j["y"] = ordered_json{{"set", cert.y_set}, {"size", bound_json(cert.y_size)}};
  j["column_bogolyubov"] = ordered_json{{"max_ratio", cert.max_sy_ratio},
                                        {"checked", cert.y_set.size()},
                                        {"ok", cert.sy_ok}};
  ordered_json rounds = ordered_json::array();
  for (const LinearityRound& r : cert.rounds) {
    ordered_json key = ordered_json::array();
    for (uint8_t d : r.map_key) key.push_back(int(d));
    rounds.push_back(ordered_json{{"sigma_size", r.sigma_size},
                                  {"sigma_quadruples", r.sigma_quadruples},
                                  {"agreement", r.agreement},
                                  {"removed", r.removed},
                                  {"map_key", key}});
  }
  ordered_json alphas = ordered_json::array();
  for (const AffineEndo& a : cert.alphas) alphas.push_back(affine_json(a));
  // Quadruple counts above are absolute (ordered 4-tuples, no normalization).
  j["linearity"] = ordered_json{{"xi", cert.xi},
                                {"certified", cert.fl_certified},
                                {"note", cert.fl_note},
                                {"k", cert.k},
                                {"y_prime", cert.y_prime},
                                {"y_prime_size", bound_json(cert.y_prime_size)},
                                {"max_listed_per_y", cert.max_listed_per_y},
                                {"listed_bound", cert.listed_bound},
                                {"listed_ok", cert.listed_ok},
                                {"rounds", rounds},
                                {"alphas", alphas}};
  j["variety"] = ordered_json{{"codim_upper", cert.variety_codim_upper}};
  j["c_set"] = ordered_json{{"size", cert.c_set_size}, {"in_a2", containment_json(cert.c_in_a2)}};
  j["dense_columns"] = ordered_json{{"codim_v0", cert.codim_v0},
                                    {"codim_v1", cert.codim_v1},
                                    {"codim_v2", cert.codim_v2},
                                    {"codim_v", cert.codim_v},
                                    {"r_size", cert.r_size},
                                    {"r_bound", cert.r_bound},
                                    {"r_ok", cert.r_ok},
                                    {"codim_check", bound_json(cert.codim_v_check)},
                                    {"codim_dilute", bound_json(cert.codim_v_dilute)},
                                    {"min_rx", cert.min_rx},
                                    {"rx_bound", cert.rx_bound},
                                    {"rx_ok", cert.rx_ok},
                                    {"min_cx", cert.min_cx}};
  j["t_spectrum"] = ordered_json{{"mode", cert.t_mode},
                                 {"threshold", cert.t_threshold},
                                 {"threshold_fixed", cert.t_threshold_fixed},
                                 {"sound", cert.t_sound},
                                 {"size", cert.t_size},
                                 {"bound", cert.t_bound},
                                 {"ok", cert.t_ok}};
  j["structured"] = ordered_json{{"codim_u", cert.codim_u_out},
                                 {"codim_tperp", cert.codim_tperp},
                                 {"u_basis", basis_json(cert.u_basis)},
                                 {"tperp_basis", basis_json(cert.tperp_basis)},
                                 {"size", cert.structured_size},
                                 {"in_d", containment_json(cert.s_in_d)},
                                 {"d_in_a3", containment_json(cert.d_in_a3)},
                                 {"in_a3", containment_json(cert.s_in_a3)}};
  j["pass"] = cert.pass;
  return j.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("certificate: ") + e.what(), e.byte);
  }
  if (j.value("format", "") != "bilbog-certificate/1")
    throw ParseError("certificate: unknown format", 0);
  Certificate cert;
  const auto& in = j.at("input");
  cert.input_path = in.at("path").get<std::string>();
  cert.p = in.at("p").get<uint32_t>();
  cert.n = in.at("n").get<uint32_t>();
  cert.group_size = in.at("N").get<size_t>();
  cert.popcount = in.at("popcount").get<int64_t>();
  cert.c = in.at("density").get<double>();
  const auto& cfg = j.at("config");
  cert.seed = cfg.at("seed").get<uint64_t>();
  cert.budget = cfg.at("budget").get<int>();
  cert.k_cap = cfg.at("k_cap").get<int>();
  cert.adaptive_t = cfg.at("adaptive_t").get<bool>();
  cert.ef = bound_from(j.at("ef"));
  cert.y_set = j.at("y").at("set").get<std::vector<size_t>>();
  cert.y_size = bound_from(j.at("y").at("size"));
  cert.max_sy_ratio = j.at("column_bogolyubov").at("max_ratio").get<double>();
  cert.sy_ok = j.at("column_bogolyubov").at("ok").get<bool>();
  const auto& lin = j.at("linearity");
  cert.xi = lin.at("xi").get<double>();
  cert.fl_certified = lin.at("certified").get<bool>();
  cert.fl_note = lin.at("note").get<std::string>();
  cert.k = lin.at("k").get<size_t>();
  cert.y_prime = lin.at("y_prime").get<std::vector<size_t>>();
  cert.y_prime_size = bound_from(lin.at("y_prime_size"));
  cert.max_listed_per_y = lin.at("max_listed_per_y").get<size_t>();
  cert.listed_bound = lin.at("listed_bound").get<double>();
  cert.listed_ok = lin.at("listed_ok").get<bool>();
  const Ambient amb(cert.p, cert.n);
  for (const auto& r : lin.at("rounds")) {
    LinearityRound round;
    round.sigma_size = r.at("sigma_size").get<size_t>();
    round.sigma_quadruples = r.at("sigma_quadruples").get<int64_t>();
    round.agreement = r.at("agreement").get<int64_t>();
    round.removed = r.at("removed").get<size_t>();
    for (const auto& d : r.at("map_key")) round.map_key.push_back(d.get<uint8_t>());
    cert.rounds.push_back(std::move(round));
  }
  for (const auto& a : lin.at("alphas")) cert.alphas.push_back(affine_from(amb, a));
  cert.variety_codim_upper = j.at("variety").at("codim_upper").get<size_t>();
  cert.c_set_size = j.at("c_set").at("size").get<int64_t>();
  cert.c_in_a2 = containment_from(j.at("c_set").at("in_a2"));
  const auto& dc = j.at("dense_columns");
  cert.codim_v0 = dc.at("codim_v0").get<size_t>();
  cert.codim_v1 = dc.at("codim_v1").get<size_t>();
  cert.codim_v2 = dc.at("codim_v2").get<size_t>();
  cert.codim_v = dc.at("codim_v").get<size_t>();
  cert.r_size = dc.at("r_size").get<size_t>();
  cert.r_bound = dc.at("r_bound").get<double>();
  cert.r_ok = dc.at("r_ok").get<bool>();
  cert.codim_v_check = bound_from(dc.at("codim_check"));
  cert.codim_v_dilute = bound_from(dc.at("codim_dilute"));
  cert.min_rx = dc.at("min_rx").get<int64_t>();
  cert.rx_bound = dc.at("rx_bound").get<double>();
  cert.rx_ok = dc.at("rx_ok").get<bool>();
  cert.min_cx = dc.at("min_cx").get<double>();
  const auto& ts = j.at("t_spectrum");
  cert.t_mode = ts.at("mode").get<std::string>();
  cert.t_threshold = ts.at("threshold").get<double>();
  cert.t_threshold_fixed = ts.at("threshold_fixed").get<double>();
  cert.t_sound = ts.at("sound").get<bool>();
  cert.t_size = ts.at("size").get<size_t>();
  cert.t_bound = ts.at("bound").get<double>();
  cert.t_ok = ts.at("ok").get<bool>();
  const auto& st = j.at("structured");
  cert.codim_u_out = st.at("codim_u").get<size_t>();
  cert.codim_tperp = st.at("codim_tperp").get<size_t>();
  cert.u_basis = basis_from(st.at("u_basis"));
  cert.tperp_basis = basis_from(st.at("tperp_basis"));
  cert.structured_size = st.at("size").get<int64_t>();
  cert.s_in_d = containment_from(st.at("in_d"));
  cert.d_in_a3 = containment_from(st.at("d_in_a3"));
  cert.s_in_a3 = containment_from(st.at("in_a3"));
  cert.pass = j.at("pass").get<bool>();
  return cert;
}

StructuredSet structured_from_certificate(const Certificate& cert) {
  const Ambient amb(cert.p, cert.n);
  std::vector<GVector> u_rows, v_rows;
  for (const auto& r : cert.u_basis) u_rows.emplace_back(amb, r);
  for (const auto& r : cert.tperp_basis) v_rows.emplace_back(amb, r);
  std::vector<AffineEndo> linears;
  for (const AffineEndo& a : cert.alphas) linears.push_back(a.linearization());
  return StructuredSet{Subspace::span(amb, u_rows), Subspace::span(amb, v_rows),
                       BohrVariety::from_affine_family(amb, linears)};
}

std::string certificate_report(const Certificate& cert) {
  std::ostringstream out;
  auto check = [&](const char* name, const BoundCheck& b, const char* rel) {
    out << name << " = " << fmt_double(b.achieved) << " (" << rel << " "
        << fmt_double(b.bound) << "): " << yn(b.ok) << '\n';
  };
  out << "== input ==\n";
  if (!cert.input_path.empty()) out << "path = " << cert.input_path << '\n';
  out << "p = " << cert.p << "\nn = " << cert.n << "\nN = " << cert.group_size
      << "\n|A| = " << cert.popcount << "\ndensity c = " << fmt_double(cert.c) << '\n';
  out << "== config ==\nseed = " << cert.seed << "\nbudget = " << cert.budget
      << "\nk_cap = " << cert.k_cap << "\nt_mode = " << cert.t_mode << '\n';
  out << "== row autocorrelation ==\n";
  check("E f", cert.ef, ">=");
  out << "== dense columns Y ==\n|Y| = " << cert.y_set.size() << " (>= "
      << fmt_double(cert.y_size.bound) << "): " << yn(cert.y_size.ok) << '\n';
  out << "== per-column spectra ==\nmax |S_y| * fhat0^2 = " << fmt_double(cert.max_sy_ratio)
      << " (<= 1): " << yn(cert.sy_ok) << '\n';
  out << "== linearization ==\nxi = " << fmt_double(cert.xi) << "\nk = " << cert.k
      << "\ncertified = " << yn(cert.fl_certified);
  if (!cert.fl_note.empty()) out << " (" << cert.fl_note << ")";
  out << "\n|Y'| = " << cert.y_prime.size() << " (>= " << fmt_double(cert.y_prime_size.bound)
      << "): " << yn(cert.y_prime_size.ok) << '\n';
  out << "max listed per column = " << cert.max_listed_per_y << " (<= "
      << fmt_double(cert.listed_bound) << "): " << yn(cert.listed_ok) << '\n';
  for (size_t i = 0; i < cert.rounds.size(); ++i) {
    const LinearityRound& r = cert.rounds[i];
    out << "round " << i + 1 << ": |sigma| = " << r.sigma_size
        << ", quadruples = " << r.sigma_quadruples << " (absolute), agreement = "
        << r.agreement << ", removed = " << r.removed << '\n';
  }
  out << "== variety and C ==\ncodim upper = " << cert.variety_codim_upper
      << "\n|C| = " << cert.c_set_size << "\nC in A2: " << yn(cert.c_in_a2.holds) << '\n';
  out << "== dense column subspace ==\ncodim V0 = " << cert.codim_v0 << ", V1 = "
      << cert.codim_v1 << ", V2 = " << cert.codim_v2 << ", V = " << cert.codim_v << '\n';
  out << "|R| = " << cert.r_size << " (<= " << fmt_double(cert.r_bound)
      << "): " << yn(cert.r_ok) << '\n';
  check("codim V", cert.codim_v_check, "<=");
  check("codim V (dilution)", cert.codim_v_dilute, "<=");
  out << "min r(x) = " << cert.min_rx << " (>= " << fmt_double(cert.rx_bound)
      << "): " << yn(cert.rx_ok) << '\n';
  out << "== output spectrum T ==\nthreshold = " << fmt_double(cert.t_threshold) << " ("
      << cert.t_mode << "; fixed = " << fmt_double(cert.t_threshold_fixed)
      << ")\nsound = " << yn(cert.t_sound) << "\n|T| = " << cert.t_size << " (<= "
      << fmt_double(cert.t_bound) << "): " << yn(cert.t_ok) << '\n';
  out << "== structured set ==\ncodim U = " << cert.codim_u_out << "\ncodim T-perp = "
      << cert.codim_tperp << "\n|S| = " << cert.structured_size << '\n';
  out << "S in D: " << yn(cert.s_in_d.holds) << "\nD in A3: " << yn(cert.d_in_a3.holds)
      << "\nS in A3: " << yn(cert.s_in_a3.holds) << '\n';
  auto witness_dump = [&](const char* name, const ContainmentRecord& c) {
    if (c.holds || c.witnesses.empty()) return;
    out << name << " violations:";
    for (const auto& [x, y] : c.witnesses) out << " (" << x << "," << y << ")";
    out << '\n';
  };
  witness_dump("C/A2", cert.c_in_a2);
  witness_dump("S/D", cert.s_in_d);
  witness_dump("D/A3", cert.d_in_a3);
  witness_dump("S/A3", cert.s_in_a3);
  out << "== verdict ==\npass = " << yn(cert.pass) << '\n'
      << "time_ms = " << fmt_double(cert.total_ms) << '\n';
  return out.str();
}

}  // namespace bilbog
