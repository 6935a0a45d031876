// Copyright 2026 The HybridShape Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "hybridshape/error.hpp"
#include "hybridshape/field/grid_io.hpp"
#include "hybridshape/flow/registration.hpp"
#include "hybridshape/hybrid/fixtures.hpp"
#include "hybridshape/hybrid/pipeline.hpp"
#include "hybridshape/hybrid/toy.hpp"
#include "hybridshape/mesh/marching.hpp"
#include "hybridshape/mesh/mesh_io.hpp"
#include "hybridshape/metrics/metrics.hpp"
#include "hybridshape/parallel.hpp"
#include "hybridshape/topo/topology.hpp"
#include "log.hpp"

namespace hybridshape::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<OptionDef> kSeed = {{"seed", "0", "random seed"}};

const std::vector<OptionDef> kHybrid = {
    {"points", "1000", "number of optimized oriented points"},
    {"resolution", "64", "indicator grid resolution"},
    {"sigma", "2", "spectral smoothing bandwidth"},
    {"m", "0.5", "indicator magnitude at the domain corner"},
    {"lr", "3e-3", "Adam learning rate for the points"},
    {"iterations", "1000", "point optimization iterations"},
    {"edge_weighting", "on", "weight the loss by the target's edge map (on/off)"},
    {"smoothing_window", "50", "window of the smoothed loss history"},
};

const std::vector<OptionDef> kRegistration = {
    {"reg_iters", "75", "registration iterations"},
    {"reg_lr", "3e-4", "registration learning rate"},
    {"reg_samples", "20000", "surface samples per registration iteration"},
    {"reg_h", "0.2", "RK4 step size"},
    {"reg_normal_weight", "0", "weight of the normal distance term"},
    {"reg_mode", "discrete", "gradient mode (discrete/adjoint)"},
    {"field_scale", "5", "std of the Fourier feature frequencies"},
    {"field_embedding", "128", "Fourier embedding length"},
    {"field_hidden", "256", "hidden width"},
    {"field_depth", "2", "hidden-to-hidden sine layers"},
    {"field_omega0", "30", "sine frequency factor"},
};

const std::vector<OptionDef> kTopo = {
    {"tau", "0.5", "offset in grid cells (> 0 dilates, < 0 erodes)"},
    {"smooth_std", "1", "Gaussian std of the signed distance smoothing, cells"},
    {"threshold", "0", "binarization level of the indicator"},
    {"attempts", "3", "offset attempts before giving up"},
    {"tau_step", "0.5", "growth of |tau| per retry"},
};

const std::vector<OptionDef> kLogging = {{"log_every", "25", "iterations between progress events (0 = none)"}};

std::vector<OptionDef> join(std::initializer_list<std::vector<OptionDef>> parts) {
  std::vector<OptionDef> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

hybrid::HybridConfig hybrid_config(const Settings& s) {
  hybrid::HybridConfig c;
  c.points = s.count("points");
  c.resolution = s.integer("resolution");
  c.sigma = s.real("sigma");
  c.m = s.real("m");
  c.lr = s.real("lr");
  c.iterations = s.integer("iterations");
  c.edge_weighting = s.flag("edge_weighting");
  c.smoothing_window = s.integer("smoothing_window");
  c.seed = s.u64("seed");
  return c;
}

flow::RegistrationConfig registration_config(const Settings& s) {
  flow::RegistrationConfig c;
  c.iterations = s.integer("reg_iters");
  c.lr = s.real("reg_lr");
  c.samples = s.count("reg_samples");
  c.h = s.real("reg_h");
  c.normal_weight = s.real("reg_normal_weight");
  const std::string& mode = s.str("reg_mode");
  if (mode == "discrete")
    c.mode = flow::GradientMode::discrete;
  else if (mode == "adjoint")
    c.mode = flow::GradientMode::adjoint;
  else
    throw UsageError("reg_mode must be discrete or adjoint");
  c.field.scale = s.real("field_scale");
  c.field.embedding = s.integer("field_embedding");
  c.field.hidden = s.integer("field_hidden");
  c.field.depth = s.integer("field_depth");
  c.field.omega0 = s.real("field_omega0");
  c.seed = s.u64("seed");
  return c;
}

topo::TopoConfig topo_config(const Settings& s) {
  topo::TopoConfig c;
  c.tau = s.real("tau");
  c.smooth_std = s.real("smooth_std");
  c.threshold = s.real("threshold");
  c.attempts = s.integer("attempts");
  c.tau_step = s.real("tau_step");
  c.registration = registration_config(s);
  return c;
}

std::function<void(int, double)> progress(const Settings& s, const std::string& stage) {
  const int every = s.integer("log_every");
  if (every <= 0) return {};
  return [every, stage](int it, double loss) {
    if (it % every == 0) Event("iter").kv("stage", stage).kv("iter", it).kv("loss", loss);
  };
}

std::string out_path(const Settings& s, const std::string& name) { return (fs::path(s.str("out")) / name).string(); }

void make_out_dir(const Settings& s) {
  std::error_code ec;
  fs::create_directories(s.str("out"), ec);
  if (ec) throw UsageError("cannot create output directory " + s.str("out") + ": " + ec.message());
}

std::string write_losses(const std::string& path, const std::vector<double>& losses) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,loss\n";
  for (std::size_t i = 0; i < losses.size(); ++i) out << i << ',' << losses[i] << '\n';
  write_text_atomic(path, out.str());
  return path;
}

mesh::SurfaceMesh load_mesh(const Settings& s, const std::string& key) {
  const std::string& path = s.str(key);
  if (!fs::exists(path)) throw UsageError("no such file for " + flag_name(key) + ": " + path);
  return mesh::read_mesh(path);
}

nlohmann::json metrics_json(const metrics::MetricReport& r) {
  return {{"assd", r.assd}, {"hd90", r.hd90}, {"nc", r.nc}, {"si", r.si}};
}

// genus of a closed connected mesh, or null
nlohmann::json genus_json(const mesh::SurfaceMesh& m) {
  try {
    return mesh::genus(m);
  } catch (const InvalidArgument&) {
    return nullptr;
  }
}

void stage(RunManifest& m, Stopwatch& w, const std::string& name) {
  const double s = w.lap();
  m.stage_seconds.emplace_back(name, s);
  Event("stage").kv("stage", name).kv("seconds", s);
}

// --- reconstruct ---------------------------------------------------------

void run_reconstruct(const Settings& s, RunManifest& m) {
  hybrid::ReconstructConfig cfg;
  cfg.hybrid = hybrid_config(s);
  cfg.hybrid.on_iteration = progress(s, "optimize");
  cfg.topo = topo_config(s);
  cfg.topo.registration.on_iteration = progress(s, "topofix");
  try {
    cfg.topo_mode = hybrid::parse_topo_mode(s.str("topo"));
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  cfg.target_samples = s.count("target_samples");
  cfg.eval_samples = s.count("eval_samples");
  cfg.seed = s.u64("seed");

  const auto target = load_mesh(s, "target");
  m.inputs["target"] = s.str("target");
  std::optional<mesh::SurfaceMesh> init;
  if (s.has("init")) {
    init = load_mesh(s, "init");
    m.inputs["init"] = s.str("init");
  }
  make_out_dir(s);

  const auto res = hybrid::reconstruct(target, cfg, init ? &*init : nullptr);
  for (const auto& [name, sec] : res.stage_seconds) {
    m.stage_seconds.emplace_back(name, sec);
    Event("stage").kv("stage", name).kv("seconds", sec);
  }

  Stopwatch w;
  field::write_scalar_grid(out_path(s, "target_chi.hgrd"), res.target_chi);
  field::write_scalar_grid(out_path(s, "chi.hgrd"), res.hybrid.chi);
  mesh::write_obj(res.extracted, out_path(s, "extracted.obj"));
  mesh::write_obj(res.mesh, out_path(s, "mesh.obj"));
  m.outputs = {out_path(s, "target_chi.hgrd"), out_path(s, "chi.hgrd"), out_path(s, "extracted.obj"),
               out_path(s, "mesh.obj"), write_losses(out_path(s, "loss.csv"), res.hybrid.losses)};
  stage(m, w, "write");

  m.results["final_loss"] = res.hybrid.final_loss;
  m.results["topofix"] = res.topo.has_value();
  if (res.topo) {
    m.results["tau"] = res.topo->tau;
    m.results["attempts"] = res.topo->attempts;
  }
  m.results["euler"] = mesh::euler_characteristic(res.mesh);
  m.results["metrics"] = metrics_json(res.metrics);
  Event("result")
      .kv("assd", res.metrics.assd)
      .kv("hd90", res.metrics.hd90)
      .kv("nc", res.metrics.nc)
      .kv("si", res.metrics.si)
      .kv("euler", mesh::euler_characteristic(res.mesh));
}

// --- topofix -------------------------------------------------------------

void run_topofix(const Settings& s, RunManifest& m) {
  topo::TopoConfig cfg = topo_config(s);
  cfg.registration.on_iteration = progress(s, "register");
  if (!fs::exists(s.str("chi"))) throw UsageError("no such file for --chi: " + s.str("chi"));
  const auto chi = field::read_scalar_grid(s.str("chi"));
  const auto defective = load_mesh(s, "mesh");
  m.inputs = {{"chi", s.str("chi")}, {"mesh", s.str("mesh")}};
  make_out_dir(s);

  Stopwatch w;
  const auto res = topo::correct_topology(chi, cfg, defective);
  stage(m, w, "topofix");

  mesh::write_obj(res.mesh, out_path(s, "mesh.obj"));
  mesh::write_obj(res.offset_mesh, out_path(s, "offset.obj"));
  nlohmann::json diag = {{"genus_before", genus_json(defective)},
                         {"genus_after", genus_json(res.mesh)},
                         {"euler_before", res.euler_before},
                         {"euler_after", res.euler_after},
                         {"tau", res.tau},
                         {"attempts", res.attempts},
                         {"si_before_registration", res.si_before_registration},
                         {"si_after_registration", res.si_after_registration},
                         {"initial_chamfer", res.initial_chamfer},
                         {"final_chamfer", res.final_chamfer}};
  write_text_atomic(out_path(s, "diagnostics.json"), diag.dump(2) + "\n");
  m.outputs = {out_path(s, "mesh.obj"), out_path(s, "offset.obj"), out_path(s, "diagnostics.json"),
               write_losses(out_path(s, "loss.csv"), res.losses)};
  m.results = diag;
  stage(m, w, "write");
  Event("result").kv("tau", res.tau).kv("euler_after", res.euler_after).kv("final_chamfer", res.final_chamfer);
}

// --- register ------------------------------------------------------------

void run_register(const Settings& s, RunManifest& m) {
  flow::RegistrationConfig cfg = registration_config(s);
  cfg.on_iteration = progress(s, "register");
  const auto source = load_mesh(s, "source");
  const auto target = load_mesh(s, "target");
  m.inputs = {{"source", s.str("source")}, {"target", s.str("target")}};
  make_out_dir(s);

  Stopwatch w;
  const auto res = flow::register_surfaces(source, target, cfg);
  stage(m, w, "register");

  mesh::write_obj(flow::to_mesh(res.deformed), out_path(s, "deformed.obj"));
  res.field.save(out_path(s, "field.bin"));
  m.outputs = {out_path(s, "deformed.obj"), out_path(s, "field.bin"),
               write_losses(out_path(s, "loss.csv"), res.losses)};
  m.results = {{"initial_chamfer", res.initial_chamfer}, {"final_chamfer", res.final_chamfer}};
  stage(m, w, "write");
  Event("result").kv("initial_chamfer", res.initial_chamfer).kv("final_chamfer", res.final_chamfer);
}

// --- eval ----------------------------------------------------------------

void run_eval(const Settings& s, RunManifest& m) {
  const auto pred = load_mesh(s, "pred");
  const auto gt = load_mesh(s, "gt");
  m.inputs = {{"pred", s.str("pred")}, {"gt", s.str("gt")}};
  Stopwatch w;
  const auto r = metrics::evaluate(pred, gt, s.count("samples"), s.u64("seed"));
  stage(m, w, "eval");

  std::ostringstream csv;
  csv.precision(10);
  csv << "ASSD,HD90,NC,SI\n" << r.assd << ',' << r.hd90 << ',' << r.nc << ',' << r.si << '\n';
  std::cout << csv.str() << '\n';
  std::cout << std::left << std::setw(14) << "ASSD" << std::setw(14) << "HD90" << std::setw(14) << "NC" << "SI\n"
            << std::setprecision(6) << std::setw(14) << r.assd << std::setw(14) << r.hd90 << std::setw(14) << r.nc
            << r.si << '\n';
  m.results = metrics_json(r);
  if (s.has("out")) {
    make_out_dir(s);
    write_text_atomic(out_path(s, "metrics.csv"), csv.str());
    m.outputs = {out_path(s, "metrics.csv")};
  }
}

// --- toy2d ---------------------------------------------------------------

void run_toy2d(const Settings& s, RunManifest& m) {
  hybrid::ToyConfig cfg;
  cfg.seed = s.u64("seed");
  cfg.polygon_pivots = s.integer("polygon_pivots");
  cfg.circle_pivots = s.integer("circle_pivots");
  cfg.circle_radius = s.real("circle_radius");
  cfg.eval_samples = s.count("eval_samples");
  cfg.baseline.iterations = s.integer("baseline_iterations");
  cfg.baseline.lr = s.real("baseline_lr");
  cfg.baseline.samples = s.count("baseline_samples");
  cfg.baseline.on_iteration = progress(s, "baseline");
  cfg.hybrid.points = s.count("points");
  cfg.hybrid.resolution = s.integer("resolution");
  cfg.hybrid.lr = s.real("lr");
  cfg.hybrid.iterations = s.integer("iterations");
  cfg.hybrid.on_iteration = progress(s, "hybrid");
  cfg.run_flow = s.flag("flow");
  cfg.flow.iterations = s.integer("flow_iterations");
  cfg.flow.on_iteration = progress(s, "flow");
  make_out_dir(s);

  Stopwatch w;
  const auto res = hybrid::run_toy2d(cfg);
  stage(m, w, "toy2d");
  m.outputs = hybrid::write_toy_outputs(res, s.str("out"));
  m.results = {{"baseline_chamfer", res.baseline_chamfer},
               {"hybrid_chamfer", res.hybrid_chamfer},
               {"ratio", res.hybrid_chamfer / res.baseline_chamfer}};
  if (res.flow) m.results["flow_chamfer"] = res.flow_chamfer;
  stage(m, w, "write");
  auto ev = Event("result");
  ev.kv("baseline_chamfer", res.baseline_chamfer).kv("hybrid_chamfer", res.hybrid_chamfer);
  if (res.flow) ev.kv("flow_chamfer", res.flow_chamfer);
}

// --- gridgen -------------------------------------------------------------

void run_gridgen(const Settings& s, RunManifest& m) {
  const std::string& name = s.str("fixture");
  const int r = s.integer("resolution");
  make_out_dir(s);
  Stopwatch w;
  if (name == "circle" || name == "polygon") {
    const mesh::Contour c = name == "circle" ? fixtures::make_circle(200, 0.25)
                                             : fixtures::make_polygon_target(40, s.u64("seed"));
    mesh::write_loops(c, out_path(s, "contour.txt"));
    mesh::write_svg({{c, "#1f3a93", 1.5, false}}, out_path(s, "contour.svg"));
    m.outputs = {out_path(s, "contour.txt"), out_path(s, "contour.svg")};
  } else {
    if (r < 8) throw UsageError("--resolution must be at least 8");
    field::ScalarGrid grid;
    const mesh::Vec3 c{0.5, 0.5, 0.5};
    try {
      if (name == "sphere")
        grid = fixtures::sphere_grid(r, c, 0.3);
      else if (name == "torus")
        grid = fixtures::torus_grid(r, c, 0.25, 0.1);
      else if (name == "tunnel")
        grid = fixtures::tunnel_fixture(r).chi;
      else if (name == "handle")
        grid = fixtures::handle_fixture(r).chi;
      else if (name == "open_torus")
        grid = fixtures::open_torus_grid(r);
      else if (name == "dented_sphere")
        grid = fixtures::sample_grid(3, r, [](const double* p) {
          return fixtures::dented_sphere_distance({p[0], p[1], p[2]});
        });
      else
        throw UsageError("unknown fixture: " + name);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    field::write_scalar_grid(out_path(s, "grid.hgrd"), grid);
    const auto mesh = mesh::marching_cubes(grid, 0.0);
    mesh::write_obj(mesh, out_path(s, "mesh.obj"));
    m.outputs = {out_path(s, "grid.hgrd"), out_path(s, "mesh.obj")};
    m.results = {{"euler", mesh::euler_characteristic(mesh)}, {"faces", mesh.faces.size()}};
  }
  stage(m, w, "gridgen");
}

std::vector<Command> build_commands() {
  std::vector<Command> cmds;
  cmds.push_back({"reconstruct",
                  "points -> indicator -> mesh -> topology fix -> metrics against a target mesh",
                  join({{{"target", "", "target surface (OBJ/PLY)", true},
                         {"init", "", "initial surface to sample points from (default: fitted sphere)"},
                         {"out", "", "output directory", true},
                         {"topo", "auto", "topology correction: auto/on/off"},
                         {"target_samples", "50000", "oriented samples behind the target indicator"},
                         {"eval_samples", "100000", "samples per surface for metrics"}},
                        kHybrid, kTopo, kRegistration, kSeed, kLogging}),
                  run_reconstruct});
  cmds.push_back({"topofix", "offset re-extraction to genus 0 plus registration back to the input mesh",
                  join({{{"chi", "", "indicator grid (HGRD), inside positive", true},
                         {"mesh", "", "defective surface (OBJ/PLY)", true},
                         {"out", "", "output directory", true}},
                        kTopo, kRegistration, kSeed, kLogging}),
                  run_topofix});
  cmds.push_back({"register", "diffeomorphic registration of a source mesh onto a target mesh",
                  join({{{"source", "", "moving surface (OBJ/PLY)", true},
                         {"target", "", "fixed surface (OBJ/PLY)", true},
                         {"out", "", "output directory", true}},
                        kRegistration, kSeed, kLogging}),
                  run_register});
  cmds.push_back({"eval", "ASSD, HD90, NC and SI of a predicted mesh against a reference",
                  join({{{"pred", "", "predicted surface (OBJ/PLY)", true},
                         {"gt", "", "reference surface (OBJ/PLY)", true},
                         {"samples", "100000", "samples per surface"},
                         {"out", "", "optional directory for metrics.csv and the manifest"}},
                        kSeed}),
                  run_eval});
  cmds.push_back({"toy2d", "polygon toy: explicit deformation baseline versus hybrid points",
                  join({{{"out", "", "output directory", true},
                         {"polygon_pivots", "40", "polygon vertices"},
                         {"circle_pivots", "200", "source circle vertices"},
                         {"circle_radius", "0.25", "source circle radius"},
                         {"eval_samples", "4000", "samples for the reported chamfer"},
                         {"baseline_iterations", "3000", "baseline iterations"},
                         {"baseline_lr", "1e-4", "baseline learning rate"},
                         {"baseline_samples", "1000", "samples per baseline iteration"},
                         {"points", "1000", "hybrid oriented points"},
                         {"resolution", "128", "hybrid grid resolution"},
                         {"lr", "3e-3", "hybrid learning rate"},
                         {"iterations", "1000", "hybrid iterations"},
                         {"flow", "off", "also run the diffeomorphic flow variant (on/off, slow)"},
                         {"flow_iterations", "3000", "flow variant iterations"}},
                        kSeed, kLogging}),
                  run_toy2d});
  cmds.push_back({"gridgen", "write a fixture grid (HGRD) and its surface",
                  join({{{"fixture", "", "sphere, torus, tunnel, handle, open_torus, dented_sphere, circle, polygon",
                          true},
                         {"resolution", "64", "grid resolution"},
                         {"out", "", "output directory", true}},
                        kSeed}),
                  run_gridgen});
  return cmds;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = build_commands();
  return cmds;
}

const Command* find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return &c;
  return nullptr;
}

int execute(const Command& cmd, const Settings& settings) {
  RunManifest manifest;
  manifest.command = cmd.name;
  manifest.config = settings;
  Event("start").kv("command", cmd.name).kv("threads", thread_count()).kv("seed", settings.str("seed"));
  auto fail = [&](const char* kind, const std::string& msg, int code) {
    Event("error").kv("command", cmd.name).kv("kind", kind).kv("message", msg).kv("exit", code);
    return code;
  };
  try {
    cmd.run(settings, manifest);
    if (cmd.writes_manifest && settings.has("out")) {
      const std::string path = write_manifest(manifest, settings.str("out"));
      Event("manifest").kv("path", path);
    }
  } catch (const UsageError& e) {
    return fail("usage", e.what(), 1);
  } catch (const InvalidArgument& e) {
    return fail("invalid_argument", e.what(), 1);
  } catch (const NumericalError& e) {
    return fail("numerical", e.what(), 2);
  } catch (const TopologyError& e) {
    return fail("topology", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("io", e.what(), 1);
  }
  Event("done").kv("command", cmd.name);
  return 0;
}

}  // namespace hybridshape::cli
