// fbk: classify linear systems over commutative rings up to feedback.
// Exit status: 0 success / true / Accept, 1 false / Reject, 2 error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbk/system_file.hpp"

namespace {

using nlohmann::json;

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;

json matrix_json(const fbk::RingMatrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.literals()}};
}

std::string module_text(const fbk::Ring& ring, const fbk::AbelianGroupStructure& s) {
  if (ring->is_field()) return s.free_rank == 0 ? "0" : ring->to_string() + "^" + std::to_string(s.free_rank);
  return s.to_string();
}

json module_json(const fbk::AbelianGroupStructure& s) {
  std::vector<std::string> torsion;
  for (const auto& t : s.torsion) torsion.push_back(t.get_str());
  return json{{"free_rank", s.free_rank}, {"torsion", torsion}};
}

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ")";
  return out.str();
}

void print_matrix(std::ostream& out, const std::string& name, const fbk::RingMatrix& m) {
  out << name << " (" << m.rows() << "x" << m.cols() << "):\n";
  if (m.rows() == 0 || m.cols() == 0) {
    out << "  (empty)\n";
    return;
  }
  std::istringstream lines(m.to_string());
  for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
}

struct Options {
  bool as_json = false;
  std::string file;
  std::string first;
  std::string second;
  std::string mode = "feedback";
  std::size_t p_max = 2;
  std::size_t p = 1;
  std::string out;
  std::string name;
  std::uint64_t prime = 2;
  std::size_t n_max = 3;
  std::size_t m_max = 2;
  unsigned workers = 1;
};

int cmd_invariants(const Options& o) {
  const auto file = fbk::parse_system_file(o.file);
  const auto report = fbk::compute_chain(file.system(o.first));
  if (o.as_json) {
    json chain = json::array();
    for (std::size_t i = 0; i <= report.stabilization_index; ++i) {
      json step{{"i", i}, {"N_rank", report.chain[i].cols()}, {"M", module_json(report.m_module(i))}};
      if (i > 0) {
        step["I"] = module_json(report.i_module(i));
        step["Z"] = module_json(report.z_module(i));
      }
      chain.push_back(step);
    }
    json doc{{"ring", file.ring->to_string()},
             {"system", o.first},
             {"n", report.state_rank},
             {"stabilization_index", report.stabilization_index},
             {"chain", chain},
             {"reachable", report.reachable},
             {"locally_brunovsky", report.locally_brunovsky}};
    if (report.locally_brunovsky) doc["z_signature"] = fbk::z_signature(report).ranks;
    std::cout << doc.dump(2) << "\n";
    return kTrue;
  }
  std::cout << "system " << o.first << " over " << file.ring->to_string() << ", n = " << report.state_rank << "\n";
  std::cout << "stabilization index s = " << report.stabilization_index << "\n";
  for (std::size_t i = 0; i <= report.stabilization_index; ++i) {
    std::cout << "  i=" << i << "  rank N=" << report.chain[i].cols()
              << "  M=" << module_text(file.ring, report.m_module(i));
    if (i > 0) {
      std::cout << "  I=" << module_text(file.ring, report.i_module(i))
                << "  Z=" << module_text(file.ring, report.z_module(i));
    }
    std::cout << "\n";
  }
  std::cout << "reachable: " << (report.reachable ? "yes" : "no") << "\n";
  std::cout << "locally Brunovsky: " << (report.locally_brunovsky ? "yes" : "no") << "\n";
  if (report.locally_brunovsky) std::cout << "Z-signature: " << fbk::z_signature(report).to_string() << "\n";
  return kTrue;
}

int cmd_canon(const Options& o) {
  const auto file = fbk::parse_system_file(o.file);
  const auto& sigma = file.system(o.first);
  const auto cert = fbk::canonical_certificate(fbk::MatrixPair{sigma.endo(), sigma.input_gens()});
  if (o.as_json) {
    json doc{{"ring", file.ring->to_string()},
             {"system", o.first},
             {"indices", cert.canonical.indices},
             {"A_c", matrix_json(cert.canonical.a_c)},
             {"B_c", matrix_json(cert.canonical.b_c)},
             {"P", matrix_json(cert.transform.p)},
             {"K", matrix_json(cert.transform.k)},
             {"Q", matrix_json(cert.transform.q)}};
    std::cout << doc.dump(2) << "\n";
    return kTrue;
  }
  std::cout << "Brunovsky indices: " << join(cert.canonical.indices) << "\n";
  print_matrix(std::cout, "A_c", cert.canonical.a_c);
  print_matrix(std::cout, "B_c", cert.canonical.b_c);
  std::cout << "certificate: A_c = P (A + B K) P^-1, B_c = P B Q\n";
  print_matrix(std::cout, "P", cert.transform.p);
  print_matrix(std::cout, "K", cert.transform.k);
  print_matrix(std::cout, "Q", cert.transform.q);
  return kTrue;
}

int cmd_equiv(const Options& o) {
  const auto file = fbk::parse_system_file(o.file);
  const auto& a = file.system(o.first);
  const auto& b = file.system(o.second);
  bool verdict = false;
  if (o.mode == "feedback") {
    verdict = fbk::feedback_equivalent(a, b);
  } else if (o.mode == "dynamic") {
    verdict = fbk::dynamic_equivalent(a, b, o.p_max);
  } else {
    verdict = fbk::stable_equivalent(a, b);
  }
  const auto sa = fbk::z_signature(a);
  const auto sb = fbk::z_signature(b);
  if (o.as_json) {
    json doc{{"mode", o.mode},
             {"first", o.first},
             {"second", o.second},
             {"equivalent", verdict},
             {"signatures", json{{o.first, sa.ranks}, {o.second, sb.ranks}}}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << o.mode << " equivalent: " << (verdict ? "true" : "false") << "\n";
    std::cout << "  " << o.first << ": " << sa.to_string() << "\n";
    std::cout << "  " << o.second << ": " << sb.to_string() << "\n";
  }
  return verdict ? kTrue : kFalse;
}

int cmd_verify(const Options& o) {
  const auto file = fbk::parse_system_file(o.file);
  const auto& entry = file.certificate(o.first);
  const auto check = fbk::verify_certificate(file.system(entry.source), file.system(entry.target), entry.cert);
  if (o.as_json) {
    json doc{{"certificate", o.first},
             {"source", entry.source},
             {"target", entry.target},
             {"accepted", check.accepted()},
             {"result", check.to_string()}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << check.to_string() << "\n";
  }
  return check.accepted() ? kTrue : kFalse;
}

void write_file(const Options& o, const fbk::SystemFile& file) {
  const std::string text = fbk::emit_system_file(file);
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw fbk::Error("cannot write " + o.out);
  out << text;
}

int cmd_sum(const Options& o) {
  const auto file = fbk::parse_system_file(o.file);
  fbk::SystemFile result{file.ring, {}, {}};
  result.systems.emplace(o.name.empty() ? o.first + "_plus_" + o.second : o.name,
                         fbk::direct_sum(file.system(o.first), file.system(o.second)));
  write_file(o, result);
  return kTrue;
}

int cmd_enlarge(const Options& o) {
  const auto file = fbk::parse_system_file(o.file);
  fbk::SystemFile result{file.ring, {}, {}};
  result.systems.emplace(o.name.empty() ? o.first + "_enlarged_" + std::to_string(o.p) : o.name,
                         fbk::dynamic_enlarge(file.system(o.first), o.p));
  write_file(o, result);
  return kTrue;
}

int cmd_k0(const Options& o) {
  const auto file = fbk::parse_system_file(o.file);
  const auto cls = fbk::k0_class(file.system(o.first));
  if (o.as_json) {
    std::cout << json{{"system", o.first}, {"k0_class", cls.entries}}.dump(2) << "\n";
  } else {
    std::cout << cls.to_string() << "\n";
  }
  return kTrue;
}

int cmd_oracle(const Options& o) {
  const auto report = fbk::orbit_oracle(o.prime, o.n_max, o.m_max, o.workers);
  if (o.as_json) {
    json doc{{"prime", report.prime},   {"n_max", o.n_max},
             {"m_max", o.m_max},        {"systems", report.systems},
             {"classes", report.classes}, {"comparisons", report.comparisons},
             {"disagreements", report.disagreements}, {"details", report.details}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "GF(" << report.prime << "), n <= " << o.n_max << ", dim B <= " << o.m_max << "\n";
    std::cout << "reachable systems: " << report.systems << "\n";
    std::cout << "classes: " << report.classes << "\n";
    std::cout << "orbit searches: " << report.comparisons << "\n";
    std::cout << "disagreements: " << report.disagreements << "\n";
    for (const auto& d : report.details) std::cout << "  " << d << "\n";
  }
  return report.disagreements == 0 ? kTrue : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback classification of linear systems over commutative rings"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.as_json, "Machine-readable output");

  auto* invariants = app.add_subcommand("invariants", "Invariant chain N_i, M_i, I_i, Z_i");
  invariants->add_option("file", o.file)->required();
  invariants->add_option("system", o.first)->required();

  auto* canon = app.add_subcommand("canon", "Brunovsky form with a (P, K, Q) certificate");
  canon->add_option("file", o.file)->required();
  canon->add_option("system", o.first)->required();

  auto* equiv = app.add_subcommand("equiv", "Decide equivalence of two systems");
  equiv->add_option("file", o.file)->required();
  equiv->add_option("first", o.first)->required();
  equiv->add_option("second", o.second)->required();
  equiv->add_option("--mode", o.mode)->check(CLI::IsMember({"feedback", "dynamic", "stable"}));
  equiv->add_option("--p-max", o.p_max, "Largest ancillary rank tried in dynamic mode");

  auto* verify = app.add_subcommand("verify", "Check a feedback isomorphism certificate");
  verify->add_option("file", o.file)->required();
  verify->add_option("certificate", o.first)->required();

  auto* sum = app.add_subcommand("sum", "Write the direct sum of two systems");
  sum->add_option("file", o.file)->required();
  sum->add_option("first", o.first)->required();
  sum->add_option("second", o.second)->required();
  sum->add_option("--out", o.out, "Output file (default: standard output)");
  sum->add_option("--name", o.name, "Name of the new system");

  auto* enlarge = app.add_subcommand("enlarge", "Write Gamma(p) (+) system");
  enlarge->add_option("file", o.file)->required();
  enlarge->add_option("system", o.first)->required();
  enlarge->add_option("-p", o.p, "Ancillary rank")->required();
  enlarge->add_option("--out", o.out, "Output file (default: standard output)");
  enlarge->add_option("--name", o.name, "Name of the new system");

  auto* k0 = app.add_subcommand("k0", "K0 class as a rank sequence");
  k0->add_option("file", o.file)->required();
  k0->add_option("system", o.first)->required();

  auto* oracle = app.add_subcommand("orbit-oracle", "Cross-check signatures against exhaustive orbit search");
  oracle->add_option("--prime", o.prime)->check(CLI::IsMember({2, 3}));
  oracle->add_option("--n-max", o.n_max);
  oracle->add_option("--m-max", o.m_max);
  oracle->add_option("--workers", o.workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (invariants->parsed()) return cmd_invariants(o);
    if (canon->parsed()) return cmd_canon(o);
    if (equiv->parsed()) return cmd_equiv(o);
    if (verify->parsed()) return cmd_verify(o);
    if (sum->parsed()) return cmd_sum(o);
    if (enlarge->parsed()) return cmd_enlarge(o);
    if (k0->parsed()) return cmd_k0(o);
    if (oracle->parsed()) return cmd_oracle(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
