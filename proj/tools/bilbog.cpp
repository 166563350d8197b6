// Batch front end: instance generation, certified pipeline runs, certificate
// re-verification, spectrum dumps, and transform benchmarks.
//
// Exit codes: 0 pass, 1 failed certificate or disagreeing verification,
// 2 usage, 3 guard refusal, 4 I/O or parse failure.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bilbog/core.hpp"
#include "bilbog/fourier.hpp"
#include "bilbog/generators.hpp"

namespace {

using namespace bilbog;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << body;
  if (!out) throw IoError("write failed on " + path);
}

int cmd_gen(const GenSpec& spec, const std::string& out_path, const std::string& format) {
  ProductSet a = generate_instance(spec);
  if (format == "text")
    write_set_text(out_path, a);
  else
    write_set_binary(out_path, a);
  std::printf("wrote %s generator=%s seed=%llu p=%u n=%u |A|=%lld density=%.6g\n",
              out_path.c_str(), spec.name.c_str(), (unsigned long long)spec.seed, spec.p,
              spec.n, (long long)a.popcount(), density(a));
  return 0;
}

int cmd_run(const std::string& in_path, const std::string& out_path,
            const std::string& variety_out, const PipelineConfig& cfg) {
  ProductSet a = read_set(in_path);
  PipelineRun run = bilinear_bogolyubov(a, cfg, in_path);
  std::fputs(certificate_report(run.cert).c_str(), stdout);
  if (!out_path.empty()) write_text_file(out_path, certificate_json(run.cert));
  if (!variety_out.empty()) write_text_file(variety_out, run.structured.variety.to_text());
  return run.cert.pass ? 0 : 1;
}

// Re-derives A^(3) from the raw set file, rebuilds the structured set recorded
// in the certificate, and re-checks the containment verdict independently.
int cmd_verify(const std::string& cert_path, const std::string& in_path, unsigned threads) {
  Certificate cert = certificate_from_json(read_text_file(cert_path));
  ProductSet a = read_set(in_path);
  const Ambient amb = a.ambient();
  bool agree = true;
  auto mismatch = [&](const char* what) {
    std::printf("disagree: %s\n", what);
    agree = false;
  };
  if (amb.p != cert.p || amb.n != cert.n) mismatch("ambient group");
  if (a.popcount() != cert.popcount) mismatch("popcount");
  if (agree) {
    PipelineSets sets = pipeline_a3(a, threads);
    StructuredSet s = structured_from_certificate(cert);
    ContainmentReport rep = containment_check(s, sets.a3);
    if (rep.structured_size != cert.structured_size) mismatch("structured size");
    if (rep.contained != cert.s_in_a3.holds) mismatch("containment verdict");
    std::printf("recheck: |S| = %lld, S in A3: %s, recorded pass = %s\n",
                (long long)rep.structured_size, rep.contained ? "yes" : "no",
                cert.pass ? "yes" : "no");
  }
  std::printf("verify: %s\n", agree ? "agree" : "disagree");
  return agree ? 0 : 1;
}

int cmd_fourier(const std::string& in_path, const std::string& axis, size_t index,
                double threshold) {
  ProductSet a = read_set(in_path);
  const Ambient& amb = a.ambient();
  if (index >= amb.size()) throw MismatchError("line index out of range");
  std::vector<size_t> pts;
  if (axis == "row") {
    pts = a.row_indices(index);
  } else {
    for (size_t x = 0; x < amb.size(); ++x)
      if (a.test(x, index)) pts.push_back(x);
  }
  DenseFn f = DenseFn::indicator(amb, pts);
  Spectrum spec = large_spectrum(f, threshold);
  std::printf("# %s %zu of %s: |line| = %zu, threshold = %.17g\n", axis.c_str(), index,
              in_path.c_str(), pts.size(), threshold);
  std::printf("# r  |coef|  re  im\n");
  for (const auto& [r, coef] : spec.entries)
    std::printf("%zu %.17g %.17g %.17g\n", r, std::abs(coef), coef.real(), coef.imag());
  return 0;
}

int cmd_bench(uint32_t p, uint32_t n, int reps, uint64_t seed, unsigned threads) {
  (void)threads;  // transforms on one line are single-threaded by design
  const Ambient amb(p, n);
  SplitMix64 rng(seed);
  DenseFn f(amb);
  for (auto& v : f.v) v = cd(rng.unit(), rng.unit());
  std::printf("# p=%u n=%u N=%zu reps=%d seed=%llu\n", p, n, amb.size(), reps,
              (unsigned long long)seed);
  std::printf("# rep  forward_ms  roundtrip_max_err\n");
  for (int r = 0; r < reps; ++r) {
    DenseFn g = f;
    auto t0 = std::chrono::steady_clock::now();
    DenseFn h = dft(g);
    auto t1 = std::chrono::steady_clock::now();
    DenseFn back = idft(h);
    double err = 0;
    for (size_t i = 0; i < back.v.size(); ++i) err = std::max(err, std::abs(back.v[i] - f.v[i]));
    std::printf("%d %.3f %.3g\n", r,
                std::chrono::duration<double, std::milli>(t1 - t0).count(), err);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified bilinear Bogolyubov pipeline over F_p^n"};
  app.require_subcommand(1);

  GenSpec spec;
  std::string out_path, in_path, cert_path, variety_out;
  std::string format = "binary", axis = "row";
  size_t line_index = 0;
  double threshold = 1e-9;
  int reps = 5;
  PipelineConfig cfg;
  unsigned threads = 1;

  CLI::App* gen = app.add_subcommand("gen", "generate an instance set file");
  gen->add_option("--p", spec.p, "field characteristic (prime)");
  gen->add_option("--n", spec.n, "dimension of G = F_p^n");
  gen->add_option("--density", spec.density, "iid density for the random generator");
  gen->add_option("--seed", spec.seed, "generator seed");
  gen->add_option("--generator", spec.name, "random | bisubspace | product | planted-noise");
  gen->add_option("--rank", spec.rank, "matrix rank for bisubspace (-1 = unconstrained)");
  gen->add_option("--codim-u", spec.codim_u, "row-side codim for the product generator");
  gen->add_option("--codim-v", spec.codim_v, "column-side codim for the product generator");
  gen->add_option("--noise", spec.noise, "iid noise rate for planted-noise");
  gen->add_option("--format", format, "binary | text");
  gen->add_option("--out", out_path, "output set file")->required();

  CLI::App* run = app.add_subcommand("run", "run the certified pipeline on a set file");
  run->add_option("--in", in_path, "input set file")->required();
  run->add_option("--out", out_path, "certificate record (JSON) output path");
  run->add_option("--variety-out", variety_out, "bilinear variety text output path");
  run->add_option("--seed", cfg.seed, "seed for the sampling stages");
  run->add_option("--budget", cfg.ransac_budget, "sampling iterations per fitting round");
  run->add_option("--k-cap", cfg.k_cap, "maximum number of linearization rounds");
  run->add_flag("--adaptive", cfg.adaptive_t_threshold,
                "use the measured column density for the output spectrum threshold");
  run->add_option("--threads", cfg.threads, "worker threads (never changes results)");

  CLI::App* verify = app.add_subcommand("verify", "re-check a certificate against raw files");
  verify->add_option("--cert", cert_path, "certificate record (JSON)")->required();
  verify->add_option("--in", in_path, "input set file")->required();
  verify->add_option("--threads", threads, "worker threads");

  CLI::App* fourier = app.add_subcommand("fourier", "dump the large spectrum of one line");
  fourier->add_option("--in", in_path, "input set file")->required();
  fourier->add_option("--axis", axis, "row | col")->check(CLI::IsMember({"row", "col"}));
  fourier->add_option("--index", line_index, "line index (encoded)");
  fourier->add_option("--threshold", threshold, "keep coefficients with modulus >= this");

  CLI::App* bench = app.add_subcommand("bench", "time the fast transform");
  bench->add_option("--p", spec.p, "field characteristic (prime)");
  bench->add_option("--n", spec.n, "dimension");
  bench->add_option("--reps", reps, "repetitions");
  bench->add_option("--seed", spec.seed, "seed for the random input function");
  bench->add_option("--threads", threads, "accepted for interface symmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(spec, out_path, format);
    if (run->parsed()) return cmd_run(in_path, out_path, variety_out, cfg);
    if (verify->parsed()) return cmd_verify(cert_path, in_path, threads);
    if (fourier->parsed()) return cmd_fourier(in_path, axis, line_index, threshold);
    if (bench->parsed()) return cmd_bench(spec.p, spec.n, reps, spec.seed, threads);
  } catch (const GuardError& e) {
    std::fprintf(stderr, "guard refusal: %s\n", e.what());
    return 3;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error at byte %zu: %s\n", e.byte_offset, e.what());
    return 4;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const MismatchError& e) {
    std::fprintf(stderr, "invalid request: %s\n", e.what());
    return 2;
  }
  return 2;
}
