#include "fatou/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "fatou/blaschke.hpp"
#include "fatou/polydyn.hpp"
#include "fatou/shadowing.hpp"

namespace fatou::cli {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file_atomically(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) {
      std::remove(tmp.c_str());
      throw IoError("failed writing '" + tmp + "'");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot move output into '" + path + "'");
  }
}

namespace {

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.output.empty()) out << text;
  else write_file_atomically(config.output, text);
}

BlaschkeProduct blaschke_from(const RunConfig& config, const char* command) {
  const auto* spec = std::get_if<BlaschkeSpec>(&config.map);
  if (spec == nullptr) throw ConfigError(std::string(command) + " needs a 'blaschke' map");
  return BlaschkeProduct(spec->theta, spec->zeros);
}

Polynomial polynomial_from(const RunConfig& config, const char* command) {
  const auto* spec = std::get_if<PolynomialSpec>(&config.map);
  if (spec == nullptr) throw ConfigError(std::string(command) + " needs a 'polynomial' map");
  return Polynomial(spec->coefficients);
}

// Explicit base point, or the first attracting fixed point whose inverse orbit is non-trivial.
PreimageTree polynomial_tree(const Polynomial& f, const RunConfig& config, int depth) {
  if (config.base_point) return inverse_orbit_tree_poly(f, *config.base_point, depth);
  for (Complex p : attracting_fixed_points(f)) {
    try {
      return inverse_orbit_tree_poly(f, p, depth);
    } catch (const PreconditionError&) {
    }
  }
  throw PreconditionError("no attracting fixed point with a non-trivial inverse orbit");
}

std::string tree_csv(const PreimageTree& tree) {
  std::string csv = "generation,re,im,modulus,residual\n";
  for (const auto& n : tree.nodes)
    csv += std::to_string(n.generation) + ',' + format_real(n.z.real()) + ',' + format_real(n.z.imag()) + ',' +
           format_real(std::abs(n.z)) + ',' + format_real(n.residual) + '\n';
  return csv;
}

}  // namespace

int cmd_preimages(const RunConfig& config, std::ostream& out, std::ostream&) {
  const int depth = config.depth.value_or(0);
  if (std::holds_alternative<PolynomialSpec>(config.map)) {
    if (config.method != "tree") throw ConfigError("method 'power_map' needs a blaschke power map");
    emit(config, out, tree_csv(polynomial_tree(polynomial_from(config, "preimages"), config, depth)));
    return kExitOk;
  }

  const BlaschkeProduct g = blaschke_from(config, "preimages");
  const Complex base = config.base_point.value_or(Complex{0.0, 0.0});
  if (config.method == "tree") {
    emit(config, out, tree_csv(preimage_tree(g, base, depth)));
    return kExitOk;
  }

  if (!g.is_power_map()) throw ConfigError("method 'power_map' needs every zero at the origin");
  std::string csv = "generation,re,im,modulus,residual\n";
  std::size_t total = 0;
  for (int k = 0; k <= depth; ++k) {
    const auto pts = power_map_preimages(g.degree(), g.theta(), base, k, kDefaultNodeCap - total);
    total += pts.size();
    for (Complex z : pts)
      csv += std::to_string(k) + ',' + format_real(z.real()) + ',' + format_real(z.imag()) + ',' +
             format_real(std::abs(z)) + ',' + format_real(std::abs(iterate(g, z, k) - base)) + '\n';
  }
  emit(config, out, csv);
  return kExitOk;
}

int cmd_shadow(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const BlaschkeProduct g = blaschke_from(config, "shadow");
  if (!config.grid) throw ConfigError("shadow needs a 'grid'");
  const SampleGrid grid = config.grid->points.empty() ? SampleGrid::shells(config.grid->i_max, config.grid->angles)
                                                      : SampleGrid::from_points(config.grid->points);
  const int depth = config.depth.value_or(0);
  const Complex base = config.base_point.value_or(Complex{0.0, 0.0});
  const ShadowReport report = empirical_constant(g, base, depth, grid);

  std::string csv = "z0_re,z0_im,q_re,q_im,generation,distance,status\n";
  for (const auto& r : report.records) {
    const bool ok = r.status == SampleStatus::ok;
    csv += format_real(r.z0.real()) + ',' + format_real(r.z0.imag()) + ',' + (ok ? format_real(r.q.real()) : "nan") +
           ',' + (ok ? format_real(r.q.imag()) : "nan") + ',' + (ok ? std::to_string(r.generation) : "-1") + ',' +
           format_real(r.distance) + ',' + (ok ? "ok" : "overflow") + '\n';
  }

  auto theory = [&](double PowerMapConstants::*field) {
    return report.theory ? format_real((*report.theory).*field) : std::string("NA");
  };
  std::ostringstream summary;
  summary << "summary,value\n"
          << "depth," << report.depth << '\n'
          << "grid," << grid.describe() << '\n'
          << "samples," << report.records.size() << '\n'
          << "overflow_samples," << report.overflow_count << '\n'
          << "tree_max_modulus," << format_real(report.tree_max_modulus) << '\n'
          << "depth_warning," << (report.depth_warning ? "true" : "false") << '\n'
          << "empirical_sup," << format_real(report.empirical_sup) << '\n'
          << "theoretical_sigma," << theory(&PowerMapConstants::sigma) << '\n'
          << "theoretical_c_prime," << theory(&PowerMapConstants::c_prime) << '\n'
          << "theoretical_c_doubleprime," << theory(&PowerMapConstants::c_doubleprime) << '\n'
          << "theoretical_c0," << theory(&PowerMapConstants::c0) << '\n';

  if (report.depth_warning)
    err << "warning: tree reaches modulus " << format_real(report.tree_max_modulus)
        << ", not beyond the outermost sample; increase depth\n";
  if (config.output.empty()) {
    out << csv << '\n' << summary.str();
  } else {
    write_file_atomically(config.output, csv);
    out << summary.str();
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream&) {
  const BlaschkeProduct g = blaschke_from(config, "verify");
  if (g.origin_multiplicity() < 1) throw PreconditionError("verify needs a zero at the origin");

  std::ostringstream report;
  report << "check,status,value,detail\n";
  bool violated = false;
  bool not_found = false;

  // Boundary derivative sweep.
  double min_mod = std::numeric_limits<double>::infinity();
  Complex worst_zeta;
  for (int j = 0; j < config.samples; ++j) {
    const Complex zeta = std::polar(1.0, 2.0 * std::numbers::pi * j / config.samples);
    const double v = boundary_derivative_modulus(g, zeta);
    if (v < min_mod) {
      min_mod = v;
      worst_zeta = zeta;
    }
  }
  const bool deriv_ok = min_mod > 1.0;
  violated = violated || !deriv_ok;
  report << "boundary_derivative," << (deriv_ok ? "pass" : "fail") << ',' << format_real(min_mod)
         << ",worst at " << format_real(worst_zeta.real()) << ' ' << format_real(worst_zeta.imag()) << '\n';

  // Expanding annulus and inverse-branch expansion.
  try {
    const AnnulusSpec annulus = find_expanding_annulus(g, config.epsilon);
    report << "annulus,pass," << format_real(annulus.r0) << ",min |g'| " << format_real(annulus.min_derivative)
           << '\n';
    const AnnulusCheck check = verify_annulus_expansion(g, annulus, config.samples, config.seed);
    const bool ok = check.violations.empty();
    violated = violated || !ok;
    report << "annulus_expansion," << (ok ? "pass" : "fail") << ',' << check.violations.size()
           << ",worst margin " << format_real(check.worst_margin) << " over " << check.preimages_checked
           << " preimages\n";
    for (const auto& v : check.violations)
      report << "violation,fail," << format_real(v.z.real()) << ' ' << format_real(v.z.imag()) << ",preimage "
             << format_real(v.preimage.real()) << ' ' << format_real(v.preimage.imag()) << '\n';
  } catch (const NotFoundError& e) {
    not_found = true;
    report << "annulus,notfound," << format_real(e.achieved_margin()) << ',' << e.what() << '\n';
  }

  // Boundary density of the inverse orbit of the base point: the largest gap
  // must keep shrinking. Generation 0 -> 1 is skipped since a base point at a
  // zero is its own preimage.
  const Complex base = config.base_point.value_or(Complex{0.0, 0.0});
  const auto profile = boundary_density_profile(g, base, config.depth.value_or(10));
  bool shrinking = true;
  for (std::size_t k = 2; k < profile.size(); ++k) shrinking = shrinking && profile[k].max_gap < profile[k - 1].max_gap;
  violated = violated || !shrinking;
  report << "density_profile," << (shrinking ? "pass" : "fail") << ',' << format_real(profile.back().max_gap)
         << ",max angular gap at depth " << profile.back().generation << '\n';
  for (const auto& step : profile)
    report << "gap," << step.generation << ',' << format_real(step.max_gap) << ',' << step.points << " points\n";

  emit(config, out, report.str());
  if (violated) return kExitViolation;
  if (not_found) return kExitNumeric;
  return kExitOk;
}

int cmd_render(const RunConfig& config, std::ostream& out, std::ostream&) {
  const Polynomial f = polynomial_from(config, "render");
  if (!config.viewport) throw ConfigError("render needs a 'viewport'");
  if (!config.resolution) throw ConfigError("render needs a 'resolution'");
  if (config.output.empty()) throw ConfigError("render needs an output path");
  const auto [w, h] = *config.resolution;
  if (w <= 0 || h <= 0) throw ConfigError("resolution must be positive");
  if (!(config.viewport->width > 0.0) || !(config.viewport->height > 0.0))
    throw ConfigError("viewport must have positive width and height");

  std::optional<PreimageTree> overlay;
  if (config.overlay_depth) overlay = polynomial_tree(f, config, *config.overlay_depth);

  const Viewport view{config.viewport->center, config.viewport->width, config.viewport->height};
  const RenderResult result = render_basin(f, view, w, h, config.max_iter, overlay ? &*overlay : nullptr);
  write_file_atomically(config.output, encode_ppm(result.image));
  if (!config.csv_output.empty()) write_file_atomically(config.csv_output, encode_pixel_csv(result.raster));
  out << "wrote " << config.output << " (" << w << "x" << h << ")\n";
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blaschke-product dynamics, preimage trees and hyperbolic shadowing"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  const std::pair<const char*, const char*> commands[] = {
      {"preimages", "Inverse orbit of the base point as CSV"},
      {"shadow", "Empirical shadowing constant over a sample grid"},
      {"verify", "Boundary derivative, annulus expansion and density checks"},
      {"render", "Basin of attraction image for a polynomial"},
  };
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "Override the configured output path");
  }

  std::vector<const char*> argv{"fatou"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    RunConfig config = parse_config_text(text.str());
    if (!config.command.empty() && config.command != command)
      throw ConfigError("config is for command '" + config.command + "', not '" + command + "'");
    if (!out_path.empty()) config.output = out_path;

    if (command == "preimages") return cmd_preimages(config, out, err);
    if (command == "shadow") return cmd_shadow(config, out, err);
    if (command == "verify") return cmd_verify(config, out, err);
    return cmd_render(config, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << " (worst residual " << format_real(e.worst_residual()) << ")\n";
    return kExitNumeric;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << " (depth reached " << e.depth_reached() << ")\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace fatou::cli
