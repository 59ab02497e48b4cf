// boxfilt: box filtrations, baselines and diagram tooling on point-cloud CSVs.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "boxfilt/baselines.hpp"
#include "boxfilt/datasets.hpp"
#include "boxfilt/filtration.hpp"
#include "boxfilt/io.hpp"
#include "boxfilt/mapper.hpp"
#include "boxfilt/metrics.hpp"

using namespace boxfilt;

namespace {

struct stage_error : std::runtime_error {
  stage_error(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what) {}
};

template <class F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const CLI::Error&) {
    throw;
  } catch (const std::exception& e) {
    throw stage_error(stage, e.what());
  }
}

void emit_diagram(const persistence_diagram& dgm, const std::string& out,
                  const std::string& plot) {
  run_stage("write diagram", [&] { write_diagram(out, dgm); });
  if (!plot.empty()) run_stage("write plot", [&] { write_diagram_svg(plot, dgm); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"box filtration toolkit"};
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic point cloud CSV");
  std::string gen_kind, gen_out;
  std::uint64_t gen_seed = 0, sigma_seed = 1;
  int n_a = -1, n_b = -1, n_c = -1;
  double sigma = 0.0, cluster_noise = 0.2;
  gen_cmd->add_option("--kind", gen_kind, "circle | ellipse | cluster | concentric")
      ->required()
      ->check(CLI::IsMember({"circle", "ellipse", "cluster", "concentric"}));
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--n1", n_a, "primary count (circle/ellipse/cluster/inner)");
  gen_cmd->add_option("--n2", n_b, "secondary count (noise/cluster/outer)");
  gen_cmd->add_option("--n3", n_c, "tertiary count (concentric noise)");
  gen_cmd->add_option("--cluster-noise", cluster_noise, "cluster sigma before scaling");
  gen_cmd->add_option("--sigma", sigma, "post-hoc Gaussian noise sigma");
  gen_cmd->add_option("--sigma-seed", sigma_seed, "seed for the post-hoc noise");
  gen_cmd->add_option("--out", gen_out, "output CSV path")->required();

  // ---- bf -----------------------------------------------------------------
  auto* bf_cmd = app.add_subcommand("bf", "box filtration persistence diagram");
  std::string bf_in, bf_out, bf_plot, bf_dump, bf_cover = "point", bf_expansion = "largest";
  box_filtration_params bf_params;
  int bf_k = 4;
  bf_cmd->add_option("--input", bf_in, "point CSV")->required();
  bf_cmd->add_option("--alpha", bf_params.alpha, "growth/coverage trade-off in [0,1]")->required();
  bf_cmd->add_option("--pi", bf_params.pi, "expansion step")->required();
  bf_cmd->add_option("--cover", bf_cover, "point | pixel")
      ->check(CLI::IsMember({"point", "pixel"}));
  bf_cmd->add_option("--pixel-width", bf_params.pixel_width, "pixel width for --cover pixel");
  bf_cmd->add_option("--expansion", bf_expansion, "largest | kopt")
      ->check(CLI::IsMember({"largest", "kopt"}));
  bf_cmd->add_option("--k", bf_k, "probe budget for --expansion kopt");
  bf_cmd->add_option("--max-dim", bf_params.max_dim, "nerve clique dimension (default 2)");
  bf_cmd->add_option("--merge-radius", bf_params.merge_radius, "merge pivot points within sup-norm radius");
  bf_cmd->add_option("--max-steps", bf_params.max_steps, "cap on the number of expansion steps");
  bf_cmd->add_option("--threads", bf_params.threads, "worker threads (default: cores)");
  bf_cmd->add_option("--out", bf_out, "diagram JSON path")->required();
  bf_cmd->add_option("--plot", bf_plot, "optional SVG plot path");
  bf_cmd->add_option("--dump-complex", bf_dump, "debug dump of the filtration complex");

  // ---- vr -----------------------------------------------------------------
  auto* vr_cmd = app.add_subcommand("vr", "Vietoris-Rips persistence diagram");
  std::string vr_in, vr_out, vr_plot;
  double vr_scale = 0.0;
  int vr_dim = 2, vr_hom = 1;
  vr_cmd->add_option("--input", vr_in, "point CSV")->required();
  vr_cmd->add_option("--max-scale", vr_scale, "largest edge length")->required();
  vr_cmd->add_option("--max-dim", vr_dim, "clique dimension (default 2)");
  vr_cmd->add_option("--out", vr_out, "diagram JSON path")->required();
  vr_cmd->add_option("--plot", vr_plot, "optional SVG plot path");

  // ---- dtm ----------------------------------------------------------------
  auto* dtm_cmd = app.add_subcommand("dtm", "distance-to-measure persistence diagram");
  std::string dtm_in, dtm_out, dtm_plot;
  double dtm_m = 0.1, dtm_scale = 0.0;
  int dtm_dim = 2;
  dtm_cmd->add_option("--input", dtm_in, "point CSV")->required();
  dtm_cmd->add_option("--m", dtm_m, "mass parameter in (0,1)")->required();
  dtm_cmd->add_option("--max-scale", dtm_scale, "largest filtration value")->required();
  dtm_cmd->add_option("--max-dim", dtm_dim, "clique dimension (default 2)");
  dtm_cmd->add_option("--out", dtm_out, "diagram JSON path")->required();
  dtm_cmd->add_option("--plot", dtm_plot, "optional SVG plot path");

  // ---- bottleneck -----------------------------------------------------------
  auto* bot_cmd = app.add_subcommand("bottleneck", "bottleneck distance of two diagram files");
  std::string bot_a, bot_b;
  int bot_dim = 1;
  bot_cmd->add_option("a", bot_a, "first diagram JSON")->required();
  bot_cmd->add_option("b", bot_b, "second diagram JSON")->required();
  bot_cmd->add_option("--dim", bot_dim, "homology dimension (default 1)");

  // ---- mapper ---------------------------------------------------------------
  auto* map_cmd = app.add_subcommand("mapper", "box mapper graph");
  std::string map_in, map_out, map_format = "json", map_cover = "point";
  mapper_params map_params;
  map_cmd->add_option("--input", map_in, "point CSV")->required();
  map_cmd->add_option("--k", map_params.k, "number of k-means pivots")->required();
  map_cmd->add_option("--pi", map_params.pi, "expansion neighborhood")->required();
  map_cmd->add_option("--alpha", map_params.alpha, "growth/coverage trade-off")->required();
  map_cmd->add_option("--seed", map_params.seed, "k-means seed");
  map_cmd->add_option("--cover", map_cover, "point | pixel")
      ->check(CLI::IsMember({"point", "pixel"}));
  map_cmd->add_option("--pixel-width", map_params.pixel_width, "pixel width for --cover pixel");
  map_cmd->add_option("--threads", map_params.threads, "worker threads");
  map_cmd->add_option("--format", map_format, "json | dot")
      ->check(CLI::IsMember({"json", "dot"}));
  map_cmd->add_option("--out", map_out, "output path")->required();

  // ---- cluster --------------------------------------------------------------
  auto* cl_cmd = app.add_subcommand(
      "cluster", "bottleneck + MDS + k-means clustering score over diagram files");
  std::string cl_manifest, cl_labels;
  std::string cl_alphas;
  int cl_k = 4, cl_dim = 1;
  std::uint64_t cl_seed = 0;
  cl_cmd->add_option("--diagrams", cl_manifest,
                     "manifest: one line per cloud, diagram paths for each alpha")
      ->required();
  cl_cmd->add_option("--alphas", cl_alphas, "comma-separated alpha grid (sets columns)")
      ->required();
  cl_cmd->add_option("--k", cl_k, "number of clusters (default 4)");
  cl_cmd->add_option("--dim", cl_dim, "homology dimension (default 1)");
  cl_cmd->add_option("--seed", cl_seed, "k-means seed");
  cl_cmd->add_option("--labels", cl_labels, "ground-truth labels, one integer per line")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      point_cloud pcd;
      if (gen_kind == "circle")
        pcd = gen_noisy_circle(n_a < 0 ? 100 : n_a, n_b < 0 ? 50 : n_b, gen_seed);
      else if (gen_kind == "ellipse")
        pcd = gen_noisy_ellipse(n_a < 0 ? 100 : n_a, n_b < 0 ? 50 : n_b, gen_seed);
      else if (gen_kind == "cluster")
        pcd = gen_circle_with_cluster(n_a < 0 ? 75 : n_a, n_b < 0 ? 100 : n_b, cluster_noise,
                                      gen_seed);
      else
        pcd = gen_concentric(n_a < 0 ? 100 : n_a, n_b < 0 ? 75 : n_b, n_c < 0 ? 20 : n_c,
                             gen_seed);
      if (sigma != 0.0) pcd = add_gaussian_noise(pcd, sigma, sigma_seed);
      run_stage("write points", [&] { write_points_csv(gen_out, pcd); });
    } else if (*bf_cmd) {
      const point_cloud pcd = run_stage("read points", [&] { return read_points_csv(bf_in); });
      bf_params.use_pixels = bf_cover == "pixel";
      if (bf_expansion == "kopt") bf_params.mode = expand_mode::k_optimal(bf_k);
      const auto res = run_stage("box filtration", [&] { return box_filtration(pcd, bf_params); });
      if (res.cover.truncated)
        std::cerr << "warning: expansion truncated at --max-steps " << bf_params.max_steps
                  << "\n";
      emit_diagram(res.diagram, bf_out, bf_plot);
      if (!bf_dump.empty()) {
        std::ofstream dump(bf_dump);
        if (!dump) throw stage_error("dump complex", "cannot open " + bf_dump);
        dump_complex(dump, res.complex);
      }
    } else if (*vr_cmd) {
      const point_cloud pcd = run_stage("read points", [&] { return read_points_csv(vr_in); });
      const auto fc =
          run_stage("rips filtration", [&] { return vr_filtration(pcd, vr_scale, vr_dim); });
      const auto dgm = run_stage("persistence", [&] { return persistence(fc, vr_hom); });
      emit_diagram(dgm, vr_out, vr_plot);
    } else if (*dtm_cmd) {
      const point_cloud pcd = run_stage("read points", [&] { return read_points_csv(dtm_in); });
      const auto fc = run_stage("dtm filtration",
                                [&] { return dtm_filtration(pcd, {dtm_m}, dtm_scale, dtm_dim); });
      const auto dgm = run_stage("persistence", [&] { return persistence(fc, 1); });
      emit_diagram(dgm, dtm_out, dtm_plot);
    } else if (*bot_cmd) {
      const auto da = run_stage("read diagram", [&] { return read_diagram(bot_a); });
      const auto db = run_stage("read diagram", [&] { return read_diagram(bot_b); });
      const double d = bottleneck_distance(da, db, bot_dim);
      if (std::isinf(d))
        std::cout << "inf\n";
      else
        std::cout << std::setprecision(17) << d << "\n";
    } else if (*map_cmd) {
      const point_cloud pcd = run_stage("read points", [&] { return read_points_csv(map_in); });
      map_params.use_pixels = map_cover == "pixel";
      const auto graph = run_stage("box mapper", [&] { return box_mapper(pcd, map_params); });
      std::ofstream out(map_out);
      if (!out) throw stage_error("write mapper", "cannot open " + map_out);
      out << export_mapper(graph,
                           map_format == "json" ? mapper_format::json : mapper_format::dot);
    } else if (*cl_cmd) {
      // manifest: one line per point cloud, one diagram path per alpha column
      std::vector<double> alphas;
      {
        std::stringstream ss(cl_alphas);
        std::string tok;
        while (std::getline(ss, tok, ',')) alphas.push_back(std::stod(tok));
      }
      std::ifstream manifest(cl_manifest);
      if (!manifest) throw stage_error("read manifest", "cannot open " + cl_manifest);
      std::vector<std::vector<persistence_diagram>> rows;
      std::string line;
      while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<persistence_diagram> row;
        std::string path;
        while (ss >> path)
          row.push_back(run_stage("read diagram", [&] { return read_diagram(path); }));
        if (row.size() != alphas.size())
          throw stage_error("read manifest", "expected one diagram per alpha on each line");
        rows.push_back(std::move(row));
      }
      const int n = static_cast<int>(rows.size());
      const auto truth = run_stage("read labels", [&] { return read_labels(cl_labels); });
      if (static_cast<int>(truth.size()) != n)
        throw stage_error("read labels", "label count does not match manifest rows");

      distance_matrix total(n);
      for (std::size_t a = 0; a < alphas.size(); ++a)
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) {
            const double d = bottleneck_distance(rows[i][a], rows[j][a], cl_dim);
            if (std::isinf(d))
              throw stage_error("bottleneck",
                                "infinite distance (essential counts differ); cannot embed");
            total.at(i, j) += d;
            total.at(j, i) += d;
          }
      const auto coords = run_stage("mds", [&] { return classical_mds(total, 2); });
      const auto labels = run_stage("kmeans", [&] { return kmeans(coords, cl_k, cl_seed); });
      std::cout << std::setprecision(17) << rand_score(labels, truth) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
