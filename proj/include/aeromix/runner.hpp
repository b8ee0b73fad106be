#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "aeromix/config.hpp"
#include "aeromix/diagnostics.hpp"
#include "aeromix/io.hpp"
#include "aeromix/mechanics.hpp"
#include "aeromix/mms.hpp"
#include "aeromix/thermal.hpp"

namespace aeromix {

namespace run_detail {

inline std::string snapshot_name(const std::string& dir, const char* stem,
                                 int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%06d.vtk", step);
  return dir + "/" + stem + buf;
}

inline int step_count(double t_end, double dt) {
  const int n = static_cast<int>(std::llround(t_end / dt));
  return std::max(n, 1);
}

inline void log_step(std::ostream* log, const char* what, int step,
                     int n_steps, double t) {
  if (!log) return;
  const int stride = std::max(1, n_steps / 20);
  if (step % stride == 0 || step == n_steps)
    *log << what << " step " << step << "/" << n_steps << "  t=" << t << "\n";
}

}  // namespace run_detail

struct MechRunResult {
  Mesh mesh;
  std::vector<MechState> snapshots;  // every snapshot_every-th step
  CsvTable probe_series;
  CsvTable mixture_series;
  std::vector<std::string> files;
};

// Time loop for the pressure/displacement case: uniform backward-Euler steps
// from the initial state (zero displacement, uniform p_init), VTK snapshots
// and probe/mixture tables as configured.  T is interpreted as the nearest
// whole number of steps.
inline MechRunResult mech_run(const RunConfig& config,
                              std::ostream* log = nullptr) {
  if (config.kind != CaseKind::mechanical)
    throw std::invalid_argument("mech_run: config case is not 'mechanical'");
  validate(config.mech);

  MechRunResult result;
  result.mesh = generate_rect_mesh(config.lx, config.ly, config.nx, config.ny);
  const Mesh& mesh = result.mesh;

  MechState state = initial_mech_state(mesh);
  state.p.setConstant(config.p_init);
  state.G = postprocess_darcy(mesh, state.p, config.mech.k);

  const ProbeSet probes(mesh, config.probes);
  const bool mixture = config.diagnostics.mixture_csv && probes.size() > 0;

  result.probe_series.header = {"time_s"};
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const std::string tag = std::to_string(i + 1);
    for (const char* field :
         {"p", "us_x", "us_y", "uf_x", "uf_y"})
      result.probe_series.header.push_back("probe" + tag + "_" + field);
  }
  if (mixture) {
    result.mixture_series.header = {"time_s"};
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const std::string tag = std::to_string(i + 1);
      for (const char* field :
           {"rho", "v_x", "v_y", "T_xx", "T_yy", "T_xy", "defect"})
        result.mixture_series.header.push_back("probe" + tag + "_" + field);
    }
  }

  const auto record_probes = [&](const MechState& s) {
    if (probes.size() == 0) return;
    std::vector<double> row = {s.time};
    for (std::size_t i = 0; i < probes.size(); ++i) {
      row.push_back(probes.sample(s.p, i));
      const Eigen::Vector2d us = probes.sample_vector(s.u_s, i);
      const Eigen::Vector2d uf = probes.sample_vector(s.u_f, i);
      row.insert(row.end(), {us.x(), us.y(), uf.x(), uf.y()});
    }
    result.probe_series.add_row(row);
  };

  const auto record_mixture = [&](const MechState& now,
                                  const MechState& before, double dt) {
    if (!mixture) return;
    std::vector<double> row = {now.time};
    const std::vector<double> chi = chi_field(mesh, before, config.mech);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const PointLocation loc = locate_point(mesh, probes.point(i).x,
                                             probes.point(i).y);
      const int e = loc.element;
      const ElementGeometry g = element_geometry(mesh, e);
      const double p_here = probes.sample(now.p, i);

      const Eigen::Matrix2d es = detail::element_strain(mesh, g, e, now.u_s);
      const Eigen::Matrix2d ef = detail::element_strain(mesh, g, e, now.u_f);
      const Eigen::Matrix2d coupling =
          chi[static_cast<std::size_t>(e)] * (es - ef);
      const Eigen::Matrix2d minus_pi = -p_here * Eigen::Matrix2d::Identity();

      std::array<PhaseSample, 3> phases;
      phases[0].rho = config.diagnostics.rho_s;
      phases[0].phi = config.mech.phi_s;
      phases[0].v = (probes.sample_vector(now.u_s, i) -
                     probes.sample_vector(before.u_s, i)) / dt;
      phases[0].T = config.mech.phi_s * minus_pi +
                    elastic_stress(es, config.mech.lambda_s, config.mech.mu_s) +
                    coupling;
      phases[1].rho = config.diagnostics.rho_g;
      phases[1].phi = config.mech.phi_g;
      phases[1].v = config.mech.phi_g > 0.0
                        ? Eigen::Vector2d(now.G[static_cast<std::size_t>(e)] /
                                          config.mech.phi_g)
                        : Eigen::Vector2d::Zero();
      phases[1].T = config.mech.phi_g * minus_pi;
      phases[2].rho = config.diagnostics.rho_f;
      phases[2].phi = config.mech.phi_f;
      phases[2].v = (probes.sample_vector(now.u_f, i) -
                     probes.sample_vector(before.u_f, i)) / dt;
      phases[2].T = config.mech.phi_f * minus_pi +
                    elastic_stress(ef, config.mech.lambda_f, config.mech.mu_f) -
                    coupling;

      const MixtureSummary m = mixture_aggregates(phases);
      row.insert(row.end(), {m.rho, m.v.x(), m.v.y(), m.T(0, 0), m.T(1, 1),
                             m.T(0, 1), m.diffusion_defect});
    }
    result.mixture_series.add_row(row);
  };

  const auto write_snapshot = [&](const MechState& s, int step) {
    if (!config.write_vtk) return;
    VtkData data;
    data.point_scalars["p"] = s.p;
    data.point_vectors["u_s"] = s.u_s;
    data.point_vectors["u_f"] = s.u_f;
    data.cell_vectors["G"] = s.G;
    std::vector<double> chi = chi_field(mesh, s, config.mech);
    data.cell_scalars["chi"] = std::move(chi);
    const std::string path =
        run_detail::snapshot_name(config.output_dir, "mech", step);
    write_vtk(mesh, data, path);
    result.files.push_back(path);
  };

  if (config.write_vtk || config.write_csv) ensure_directory(config.output_dir);

  record_probes(state);
  write_snapshot(state, 0);
  result.snapshots.push_back(state);

  const int n_steps = run_detail::step_count(config.t_end, config.dt);
  for (int step = 1; step <= n_steps; ++step) {
    MechState before = state;
    try {
      state = mech_step(mesh, state, config.mech, config.mech_bcs, config.dt,
                        config.mech_opts);
    } catch (const SolverFailure& err) {
      throw SolverFailure("mech_run: step " + std::to_string(step) + " at t=" +
                          std::to_string(before.time + config.dt) + ": " +
                          err.what());
    }
    record_probes(state);
    record_mixture(state, before, config.dt);
    if (step % config.snapshot_every == 0 || step == n_steps) {
      write_snapshot(state, step);
      result.snapshots.push_back(state);
    }
    run_detail::log_step(log, "mech", step, n_steps, state.time);
  }

  if (config.write_csv) {
    const std::string probe_path = config.output_dir + "/probes.csv";
    write_csv_timeseries(result.probe_series, probe_path);
    result.files.push_back(probe_path);
    if (mixture) {
      const std::string mix_path = config.output_dir + "/mixture.csv";
      write_csv_timeseries(result.mixture_series, mix_path);
      result.files.push_back(mix_path);
    }
  }
  return result;
}

struct ThermalRunResult {
  Mesh mesh;
  std::vector<ThermalState> snapshots;
  CsvTable probe_series;
  CsvTable energy_series;
  CsvTable centerline;
  int max_newton_iterations = 0;
  std::vector<std::string> files;
};

// Time loop for the three-temperature case: starts from a uniform field at
// theta_init and marches with damped Newton steps.  Writes probe and energy
// tables plus the final mid-width temperature profile.
inline ThermalRunResult thermal_run(const RunConfig& config,
                                    std::ostream* log = nullptr) {
  if (config.kind != CaseKind::thermal)
    throw std::invalid_argument("thermal_run: config case is not 'thermal'");
  validate(config.thermal);

  ThermalRunResult result;
  result.mesh = generate_rect_mesh(config.lx, config.ly, config.nx, config.ny);
  const Mesh& mesh = result.mesh;

  ThermalState state = initial_thermal_state(mesh, config.theta_init);
  const ProbeSet probes(mesh, config.probes);

  result.probe_series.header = {"time_s"};
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const std::string tag = std::to_string(i + 1);
    for (const char* field : {"theta_s", "theta_g", "theta_f"})
      result.probe_series.header.push_back("probe" + tag + "_" + field);
  }
  result.energy_series.header = {"time_s", "energy", "film_inflow"};

  const auto record = [&](const ThermalState& s) {
    if (probes.size() > 0) {
      std::vector<double> row = {s.time};
      for (std::size_t i = 0; i < probes.size(); ++i) {
        row.push_back(probes.sample(s.theta_s, i));
        row.push_back(probes.sample(s.theta_g, i));
        row.push_back(probes.sample(s.theta_f, i));
      }
      result.probe_series.add_row(row);
    }
    result.energy_series.add_row(
        {s.time, thermal_energy(mesh, s, config.thermal),
         robin_net_inflow(mesh, s, config.thermal, config.thermal_bcs,
                          config.thermal_opts.mass_lumping)});
  };

  const auto write_snapshot = [&](const ThermalState& s, int step) {
    if (!config.write_vtk) return;
    VtkData data;
    data.point_scalars["theta_s"] = s.theta_s;
    data.point_scalars["theta_g"] = s.theta_g;
    data.point_scalars["theta_f"] = s.theta_f;
    std::vector<double> kappa(static_cast<std::size_t>(mesh.n_elements()));
    for (int e = 0; e < mesh.n_elements(); ++e) {
      const ElementGeometry g = element_geometry(mesh, e);
      const Vec2 x = bary_to_xy(g, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
      kappa[static_cast<std::size_t>(e)] = knudsen_conductivity(
          config.thermal.pore_size(x.x, x.y), config.thermal.l_g,
          config.thermal.beta, config.thermal.kappa_bg);
    }
    data.cell_scalars["kappa_g"] = std::move(kappa);
    const std::string path =
        run_detail::snapshot_name(config.output_dir, "thermal", step);
    write_vtk(mesh, data, path);
    result.files.push_back(path);
  };

  if (config.write_vtk || config.write_csv) ensure_directory(config.output_dir);

  record(state);
  write_snapshot(state, 0);
  result.snapshots.push_back(state);

  const int n_steps = run_detail::step_count(config.t_end, config.dt);
  for (int step = 1; step <= n_steps; ++step) {
    ThermalStepReport report;
    try {
      state = thermal_step(mesh, state, config.thermal, config.thermal_bcs,
                           config.newton, config.dt, config.thermal_opts,
                           nullptr, &report);
    } catch (const NewtonFailure& err) {
      throw NewtonFailure("thermal_run: step " + std::to_string(step) +
                          " at t=" + std::to_string(state.time + config.dt) +
                          ": " + err.what());
    } catch (const SolverFailure& err) {
      throw SolverFailure("thermal_run: step " + std::to_string(step) +
                          " at t=" + std::to_string(state.time + config.dt) +
                          ": " + err.what());
    }
    result.max_newton_iterations =
        std::max(result.max_newton_iterations, report.newton_iterations);
    record(state);
    if (step % config.snapshot_every == 0 || step == n_steps) {
      write_snapshot(state, step);
      result.snapshots.push_back(state);
    }
    run_detail::log_step(log, "thermal", step, n_steps, state.time);
  }

  result.centerline.header = {"y_m", "theta_s", "theta_g", "theta_f"};
  for (const CenterlineSample& row : centerline_profile(mesh, state, 0.5))
    result.centerline.add_row({row.y, row.theta_s, row.theta_g, row.theta_f});

  if (config.write_csv) {
    for (const auto& [table, name] :
         {std::pair<const CsvTable*, const char*>{&result.probe_series, "probes.csv"},
          {&result.energy_series, "energy.csv"},
          {&result.centerline, "centerline.csv"}}) {
      if (table->header.empty()) continue;
      const std::string path = config.output_dir + "/" + name;
      write_csv_timeseries(*table, path);
      result.files.push_back(path);
    }
  }
  return result;
}

struct MmsMechReport {
  std::vector<int> n;
  std::vector<double> h, err_p, err_us, err_uf;
  std::vector<double> rate_p, rate_us, rate_uf;  // first entry 0
  CsvTable table;
  std::vector<std::string> files;
};

// Convergence study against the stock manufactured pressure/displacement
// fields: equal-spaced meshes, a few time steps each, L2 errors and observed
// orders between consecutive levels.
inline MmsMechReport mms_mech_run(const RunConfig& config,
                                  std::ostream* log = nullptr) {
  if (config.kind != CaseKind::mms_mechanical)
    throw std::invalid_argument("mms_mech_run: config case is not 'mms-mechanical'");

  const MechMms mms = make_mech_mms(config.lx, config.ly, config.mms.tau);
  const MechBCs bcs = mms.bcs();
  const MechSources sources = mms.sources();

  MmsMechReport report;
  for (const int n : config.mms.refinements) {
    const Mesh mesh = generate_rect_mesh(config.lx, config.ly, n, n);
    MechState state = mms.interpolate(mesh, 0.0);
    for (int step = 0; step < config.mms.steps; ++step)
      state = mech_step(mesh, state, mms.params, bcs, config.mms.dt, {},
                        &sources);
    const MechMms::Errors err = mms.l2_error(mesh, state, state.time);
    report.n.push_back(n);
    report.h.push_back(std::max(config.lx, config.ly) / n);
    report.err_p.push_back(err.p);
    report.err_us.push_back(err.us);
    report.err_uf.push_back(err.uf);
    if (log)
      *log << "mms-mechanical n=" << n << "  err_p=" << err.p
           << "  err_us=" << err.us << "  err_uf=" << err.uf << "\n";
  }

  const auto rate = [&](const std::vector<double>& err, std::size_t i) {
    return std::log(err[i - 1] / err[i]) /
           std::log(report.h[i - 1] / report.h[i]);
  };
  for (std::size_t i = 0; i < report.n.size(); ++i) {
    report.rate_p.push_back(i ? rate(report.err_p, i) : 0.0);
    report.rate_us.push_back(i ? rate(report.err_us, i) : 0.0);
    report.rate_uf.push_back(i ? rate(report.err_uf, i) : 0.0);
  }

  report.table.header = {"n",      "h",       "err_p",   "err_us", "err_uf",
                         "rate_p", "rate_us", "rate_uf"};
  for (std::size_t i = 0; i < report.n.size(); ++i)
    report.table.add_row({static_cast<double>(report.n[i]), report.h[i],
                          report.err_p[i], report.err_us[i], report.err_uf[i],
                          report.rate_p[i], report.rate_us[i],
                          report.rate_uf[i]});
  if (config.write_csv) {
    ensure_directory(config.output_dir);
    const std::string path = config.output_dir + "/mms_mechanical.csv";
    write_csv_timeseries(report.table, path);
    report.files.push_back(path);
  }
  return report;
}

struct MmsThermalReport {
  std::vector<int> n;
  std::vector<double> h, err_ts, err_tg, err_tf;
  std::vector<double> rate_ts, rate_tg, rate_tf;
  int max_newton_iterations = 0;
  CsvTable table;
  std::vector<std::string> files;
};

// Convergence study against the stock manufactured temperature fields.
inline MmsThermalReport mms_thermal_run(const RunConfig& config,
                                        std::ostream* log = nullptr) {
  if (config.kind != CaseKind::mms_thermal)
    throw std::invalid_argument("mms_thermal_run: config case is not 'mms-thermal'");

  const ThermalMms mms = make_thermal_mms(config.lx, config.ly, config.mms.tau);
  const ThermalBCs bcs = mms.bcs();
  const ThermalSources sources = mms.sources();

  MmsThermalReport report;
  for (const int n : config.mms.refinements) {
    const Mesh mesh = generate_rect_mesh(config.lx, config.ly, n, n);
    ThermalState state = mms.interpolate(mesh, 0.0);
    for (int step = 0; step < config.mms.steps; ++step) {
      ThermalStepReport step_report;
      state = thermal_step(mesh, state, mms.params, bcs, config.newton,
                           config.mms.dt, config.thermal_opts, &sources,
                           &step_report);
      report.max_newton_iterations = std::max(
          report.max_newton_iterations, step_report.newton_iterations);
    }
    const ThermalMms::Errors err = mms.l2_error(mesh, state, state.time);
    report.n.push_back(n);
    report.h.push_back(std::max(config.lx, config.ly) / n);
    report.err_ts.push_back(err.ts);
    report.err_tg.push_back(err.tg);
    report.err_tf.push_back(err.tf);
    if (log)
      *log << "mms-thermal n=" << n << "  err_s=" << err.ts
           << "  err_g=" << err.tg << "  err_f=" << err.tf
           << "  newton<=" << report.max_newton_iterations << "\n";
  }

  const auto rate = [&](const std::vector<double>& err, std::size_t i) {
    return std::log(err[i - 1] / err[i]) /
           std::log(report.h[i - 1] / report.h[i]);
  };
  for (std::size_t i = 0; i < report.n.size(); ++i) {
    report.rate_ts.push_back(i ? rate(report.err_ts, i) : 0.0);
    report.rate_tg.push_back(i ? rate(report.err_tg, i) : 0.0);
    report.rate_tf.push_back(i ? rate(report.err_tf, i) : 0.0);
  }

  report.table.header = {"n",       "h",       "err_theta_s", "err_theta_g",
                         "err_theta_f", "rate_theta_s", "rate_theta_g",
                         "rate_theta_f"};
  for (std::size_t i = 0; i < report.n.size(); ++i)
    report.table.add_row({static_cast<double>(report.n[i]), report.h[i],
                          report.err_ts[i], report.err_tg[i], report.err_tf[i],
                          report.rate_ts[i], report.rate_tg[i],
                          report.rate_tf[i]});
  if (config.write_csv) {
    ensure_directory(config.output_dir);
    const std::string path = config.output_dir + "/mms_thermal.csv";
    write_csv_timeseries(report.table, path);
    report.files.push_back(path);
  }
  return report;
}

// Dispatch on the configured case.  Throws on any failure; callers translate
// exceptions to exit codes.
inline void run_case(const RunConfig& config, std::ostream* log = nullptr) {
  switch (config.kind) {
    case CaseKind::mechanical:
      mech_run(config, log);
      return;
    case CaseKind::thermal:
      thermal_run(config, log);
      return;
    case CaseKind::mms_mechanical:
      mms_mech_run(config, log);
      return;
    case CaseKind::mms_thermal:
      mms_thermal_run(config, log);
      return;
  }
  throw std::invalid_argument("run_case: unknown case kind");
}

}  // namespace aeromix
