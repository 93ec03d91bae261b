#include "projdyn/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "projdyn/arrangements.hpp"
#include "projdyn/corpus.hpp"
#include "projdyn/counting.hpp"
#include "projdyn/frances.hpp"
#include "projdyn/json_io.hpp"
#include "projdyn/qp_limits.hpp"
#include "projdyn/svg.hpp"
#include "projdyn/triangular.hpp"

namespace projdyn {

namespace {

json parse_json_arg(const std::string& arg) {
  // Inline JSON (objects, arrays, bare numbers) or a file path.
  try {
    return json::parse(arg);
  } catch (const json::exception&) {
  }
  std::ifstream in(arg);
  if (!in) throw BadInputError("cannot open input file or parse as JSON: " + arg);
  json j;
  in >> j;
  return j;
}

struct Output {
  std::string json_path, svg_path;
  RunManifest manifest;

  int emit(json result, const std::string& svg = "") const {
    json doc;
    doc["manifest"] = to_json(manifest);
    doc["result"] = std::move(result);
    std::string text = doc.dump(2);
    std::cout << text << "\n";
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      out << text << "\n";
    }
    if (!svg_path.empty() && !svg.empty()) {
      std::ofstream out(svg_path);
      out << svg;
    }
    return 0;
  }
};

int fail(int code, const std::string& kind, const std::string& what) {
  json err;
  err["error"] = json{{"kind", kind}, {"reason", what}};
  std::cout << err.dump(2) << "\n";
  return code;
}

RationalityHint hint_from_string(const std::string& s) {
  RationalityHint h;
  if (s.empty() || s == "unknown") return h;
  if (s == "irrational") {
    h.kind = Rationality::Irrational;
    return h;
  }
  auto slash = s.find('/');
  h.kind = Rationality::Rational;
  if (slash == std::string::npos) {
    h.p = std::stoll(s);
    h.q = 1;
  } else {
    h.p = std::stoll(s.substr(0, slash));
    h.q = std::stoll(s.substr(slash + 1));
  }
  return h;
}

}  // namespace

int cli_run(const std::vector<std::string>& args) {
  CLI::App app{"projdyn: dynamics of discrete subgroups of PSL(n+1,C)"};
  app.require_subcommand(1);

  std::string mode = "float";
  double tol = kDefaultTol;
  unsigned long long seed = 20240401;
  std::string json_path, svg_path;
  app.add_option("--mode", mode, "scalar backend: float or exact")
      ->check(CLI::IsMember({"float", "exact"}));
  app.add_option("--tol", tol, "relative tolerance for float predicates");
  app.add_option("--seed", seed, "seed for sampled computations");
  app.add_option("--json", json_path, "also write the JSON output here");
  app.add_option("--svg", svg_path, "write an SVG drawing here (where supported)");

  // ---- classify
  auto* classify_cmd = app.add_subcommand("classify", "classify a PSL(3,C) element");
  std::string classify_matrix, classify_hint;
  classify_cmd->add_option("--matrix", classify_matrix, "3x3 matrix (JSON or file)")->required();
  classify_cmd->add_option("--hint", classify_hint, "rotation hint: p/q or 'irrational'");

  // ---- limits
  auto* limits_cmd = app.add_subcommand("limits", "quasi-projective limits of a word orbit");
  std::string limits_group, limits_cloud;
  int limits_len = 6, limits_samples = 64;
  limits_cmd->add_option("--group", limits_group, "generators (JSON or file)")->required();
  limits_cmd->add_option("--max-word-length,-L", limits_len, "word length bound");
  limits_cmd->add_option("--samples", limits_samples, "sample count for the Kulkarni layers");
  limits_cmd->add_option("--emit-cloud", limits_cloud, "write sampled cloud points here");

  // ---- kulkarni case1 / diagonal
  auto* kul_cmd = app.add_subcommand("kulkarni", "Kulkarni classifiers for triangular groups");
  auto* case1_cmd = kul_cmd->add_subcommand("case1", "commutative case-1 classifier");
  std::string case1_spec;
  int case1_bound = 8;
  case1_cmd->add_option("--spec", case1_spec, "WmuSpec (JSON or file)")->required();
  case1_cmd->add_option("--bound", case1_bound, "lattice search bound");
  auto* diag_cmd = kul_cmd->add_subcommand("diagonal", "diagonal pair classifier");
  std::string diag_alpha, diag_beta, diag_hint_a, diag_hint_b;
  int diag_bound = 20;
  diag_cmd->add_option("--alpha", diag_alpha, "alpha (JSON scalar)")->required();
  diag_cmd->add_option("--beta", diag_beta, "beta (JSON scalar)")->required();
  diag_cmd->add_option("--hint-alpha", diag_hint_a, "argument rationality hint");
  diag_cmd->add_option("--hint-beta", diag_hint_b, "argument rationality hint");
  diag_cmd->add_option("--bound", diag_bound, "dependence search bound");

  // ---- layers
  auto* layers_cmd = app.add_subcommand("layers", "four-layer decomposition report");
  std::string layers_group;
  int layers_word_bound = 3;
  layers_cmd->add_option("--group", layers_group, "generators (JSON or file)")->required();
  layers_cmd->add_option("--bound", layers_word_bound, "word bound for the value groups");

  // ---- frances
  auto* frances_cmd = app.add_subcommand("frances", "Frances limit set tools");
  auto* fr_cyc = frances_cmd->add_subcommand("cyclic", "cyclic-group Frances limit set");
  std::string fr_matrix;
  fr_cyc->add_option("--matrix", fr_matrix, "matrix (JSON or file)")->required();
  auto* fr_blocks = frances_cmd->add_subcommand("blocks", "block decomposition of a sequence");
  std::string fr_spec;
  fr_blocks->add_option("--spec", fr_spec, "SingularSequenceSpec (JSON or file)")->required();
  auto* fr_group = frances_cmd->add_subcommand("group", "word-approximated Frances limit set");
  std::string fr_gr_group;
  int fr_gr_len = 6;
  fr_group->add_option("--group", fr_gr_group, "generators (JSON or file)")->required();
  fr_group->add_option("-L,--max-word-length", fr_gr_len, "word length bound");

  // ---- arrange
  auto* arr_cmd = app.add_subcommand("arrange", "4-line arrangement tools");
  std::vector<std::string> arr_param;
  std::vector<std::string> arr_z;
  std::string arr_eta;
  std::string arr_lines;
  auto* arr_check = arr_cmd->add_subcommand("check", "parameter space membership");
  auto* arr_qtable = arr_cmd->add_subcommand("qtable", "the ten intersection points");
  auto* arr_slice = arr_cmd->add_subcommand("slice", "slice geometry for (z, eta)");
  auto* arr_norm = arr_cmd->add_subcommand("normalize", "normalize 4 lines to the standard form");
  for (auto* c : {arr_check, arr_qtable, arr_slice})
    c->add_option("--param", arr_param, "zeta1 zeta2 (JSON scalars)")->expected(2);
  arr_slice->add_option("--z", arr_z, "base point z1 z2 (JSON scalars)")->expected(2);
  arr_slice->add_option("--eta", arr_eta, "slice parameter (JSON scalar or 'inf')");
  arr_norm->add_option("--lines", arr_lines, "4 lines, each a pair of lift points (JSON)");

  // ---- count
  auto* count_cmd = app.add_subcommand("count", "Fuchsian orbital counting");
  std::string count_spec, count_base, count_w, count_csv;
  int count_bound = 4;
  double count_s = 1.0;
  auto* count_orbit = count_cmd->add_subcommand("orbit", "enumerate the orbit table");
  auto* count_series = count_cmd->add_subcommand("series", "Poincare series partial sum");
  auto* count_delta = count_cmd->add_subcommand("delta", "critical exponent estimates");
  auto* count_measure = count_cmd->add_subcommand("measure", "Patterson-Sullivan atoms");
  for (auto* c : {count_orbit, count_series, count_delta, count_measure}) {
    c->add_option("--spec", count_spec, "FuchsianSpec (JSON or file), or 'reference'")
        ->required();
    c->add_option("--base", count_base, "base point z (JSON scalar)");
    c->add_option("--w", count_w, "orbit point w (JSON scalar; defaults to z)");
    c->add_option("--bound", count_bound, "word bound");
  }
  count_series->add_option("-s", count_s, "series exponent");
  count_measure->add_option("-s", count_s, "measure exponent");
  count_orbit->add_option("--csv", count_csv, "write the table as CSV here");

  // ---- corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "bundled worked examples");
  auto* corpus_list = corpus_cmd->add_subcommand("list", "list corpus entries");
  auto* corpus_run_cmd = corpus_cmd->add_subcommand("run", "run a corpus entry");
  std::string corpus_name;
  corpus_run_cmd->add_option("name", corpus_name, "entry name")->required();

  std::vector<const char*> argv;
  std::vector<std::string> owned = args;
  argv.push_back("projdyn");
  for (auto& a : owned) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e);
      return 0;
    }
    return fail(2, "usage", e.what());
  }

  Output out;
  out.json_path = json_path;
  out.svg_path = svg_path;
  out.manifest.tol = tol;
  out.manifest.mode = mode;
  out.manifest.seed = seed;
  {
    std::string all;
    for (const auto& a : owned) all += a + "\n";
    out.manifest.inputs_digest = fnv1a_digest(all);
  }

  try {
    if (classify_cmd->parsed()) {
      out.manifest.command = "classify";
      ProjMapX g(matx_from_json(parse_json_arg(classify_matrix)), tol);
      EigenData ed = eigen3(g, tol);
      ElementClass cls = classify_element(g, hint_from_string(classify_hint), tol);
      json res;
      res["major"] = to_string(cls.major);
      res["minor"] = to_string(cls.minor);
      json evs = json::array();
      for (const auto& p : ed.pairs)
        evs.push_back(json{{"value", to_json(p.value)},
                           {"algebraic", p.algebraic_mult},
                           {"geometric", p.geometric_mult}});
      res["eigenvalues"] = std::move(evs);
      res["provisional_flags"] =
          cls.provisional_rationality ? json::array({"rotation-rationality"}) : json::array();
      return out.emit(std::move(res));
    }

    if (limits_cmd->parsed()) {
      out.manifest.command = "limits";
      auto gens = group_from_json(parse_json_arg(limits_group));
      WordOrbit orbit = build_word_orbit(gens, limits_len, tol);
      auto limits = limit_maps_of_group(orbit, tol);
      KulkarniLayers layers =
          approximate_kulkarni(orbit, limits_samples, static_cast<unsigned>(seed), 8, tol);
      LimitSetDescriptor eq = equicontinuity_complement(orbit, tol);
      json res;
      res["orbit_size"] = orbit.elements.size();
      json lim = json::array();
      for (const auto& q : limits) {
        json o;
        o["matrix"] = to_json(q.matrix);
        if (q.kernel) o["kernel"] = to_json(*q.kernel);
        o["image"] = to_json(q.image);
        lim.push_back(std::move(o));
      }
      res["limit_maps"] = std::move(lim);
      res["equicontinuity_complement"] = to_json(eq);
      res["kulkarni_cloud_sizes"] =
          json::array({layers.L0.cloud.size(), layers.L1.cloud.size(), layers.L2.cloud.size()});
      if (!limits_cloud.empty()) {
        json cloud = json::array();
        for (const auto& layer : {layers.L0, layers.L1, layers.L2})
          for (const auto& p : layer.cloud) cloud.push_back(to_json(p));
        std::ofstream f(limits_cloud);
        f << cloud.dump(2) << "\n";
      }
      return out.emit(std::move(res));
    }

    if (case1_cmd->parsed()) {
      out.manifest.command = "kulkarni case1";
      WmuSpec spec = wmu_from_json(parse_json_arg(case1_spec));
      Case1Result res = classify_case1(spec, case1_bound);
      json o;
      o["case"] = to_string(res.case_tag);
      o["condition_F"] = to_string(res.condition_f);
      o["kulkarni"] = to_json(res.kulkarni);
      o["provenance"] = json{{"discrete", res.discrete_from},
                             {"rational_rotation", res.rational_from},
                             {"irrational_rotation", res.irrational_from}};
      o["provisional"] = res.provisional;
      return out.emit(std::move(o));
    }

    if (diag_cmd->parsed()) {
      out.manifest.command = "kulkarni diagonal";
      DiagonalPairSpec spec;
      json ja = parse_json_arg(diag_alpha), jb = parse_json_arg(diag_beta);
      spec.alpha = cplx_from_json(ja);
      spec.beta = cplx_from_json(jb);
      if (mode == "exact") {
        spec.alpha_exact = surd_from_json(ja);
        spec.beta_exact = surd_from_json(jb);
      }
      spec.alpha_arg_hint = hint_from_string(diag_hint_a);
      spec.beta_arg_hint = hint_from_string(diag_hint_b);
      DiagonalResult res = classify_diagonal(spec, diag_bound, tol);
      json o;
      o["case"] = to_string(res.case_tag);
      o["kulkarni"] = to_json(res.kulkarni);
      o["assuming_independent"] = res.assuming_independent;
      if (res.dependence_found)
        o["dependence"] = json::array({res.dependence_found->first, res.dependence_found->second});
      return out.emit(std::move(o));
    }

    if (layers_cmd->parsed()) {
      out.manifest.command = "layers";
      auto gens = group_from_json(parse_json_arg(layers_group));
      LayerDecomposition d = decompose_layers(gens, layers_word_bound, 12, tol);
      json o;
      o["k"] = d.core_rank;
      o["r"] = d.r;
      o["m"] = d.m;
      o["n"] = d.n;
      o["bound_ok"] = d.bound_ok;
      o["provisional"] = d.provisional;
      o["witnesses"] = json{{"core", d.core_witnesses},
                            {"layer2", d.layer2_witnesses},
                            {"layer3", d.layer3_witnesses},
                            {"layer4", d.layer4_witnesses}};
      return out.emit(std::move(o));
    }

    if (fr_cyc->parsed()) {
      out.manifest.command = "frances cyclic";
      ProjMapX g(matx_from_json(parse_json_arg(fr_matrix)), tol);
      LimitSetDescriptor d = frances_cyclic(g, tol);
      return out.emit(json{{"frances", to_json(d)}});
    }

    if (fr_blocks->parsed()) {
      out.manifest.command = "frances blocks";
      SingularSequenceSpec spec = seq_spec_from_json(parse_json_arg(fr_spec));
      BlockDecomposition bd = blocks_of(spec);
      auto [s0, L] = middle_space(bd);
      PolygonDoc doc = polygon_doc(bd);
      json o;
      o["dims"] = bd.dims;
      o["middle_block"] = s0;
      o["middle_space"] = to_json(L);
      return out.emit(std::move(o), polygon_svg(doc));
    }

    if (fr_group->parsed()) {
      out.manifest.command = "frances group";
      auto gens = group_from_json(parse_json_arg(fr_gr_group));
      WordOrbit orbit = build_word_orbit(gens, fr_gr_len, tol);
      auto subs = frances_group_approx(orbit, tol);
      json arr = json::array();
      for (const auto& s : subs) arr.push_back(to_json(s));
      auto pure = subs.empty() ? PureDimension{}
                               : check_purely_dimensional(subs, gens[0].size() - 1);
      return out.emit(json{{"subspaces", std::move(arr)},
                           {"pure_dimension", pure.k},
                           {"purely_dimensional", pure.ok}});
    }

    if (arr_check->parsed() || arr_qtable->parsed() || arr_slice->parsed()) {
      out.manifest.command = "arrange";
      if (arr_param.size() != 2) return fail(2, "usage", "--param needs zeta1 zeta2");
      if (mode == "exact") {
        ArrangementParam<SurdComplex> par{surd_from_json(parse_json_arg(arr_param[0])),
                                          surd_from_json(parse_json_arg(arr_param[1]))};
        if (arr_check->parsed())
          return out.emit(json{{"in_P", in_parameter_space(par.zeta1, par.zeta2)}});
        if (arr_qtable->parsed()) {
          json o = json::array();
          for (const auto& [ij, p] : intersections_q(par)) {
            json lift = json::array();
            for (int i = 0; i < 3; ++i) lift.push_back(to_json(p.lift()(i)));
            o.push_back(json{{"i", ij.first}, {"j", ij.second}, {"lift", std::move(lift)}});
          }
          double a = par.zeta1.to_complex().real(), b = par.zeta2.to_complex().real();
          return out.emit(json{{"q", std::move(o)}}, arrangement_svg(a, b));
        }
        SurdComplex z1 = surd_from_json(parse_json_arg(arr_z.at(0)));
        SurdComplex z2 = surd_from_json(parse_json_arg(arr_z.at(1)));
        if (arr_eta == "inf") {
          int cnt = intersection_count<SurdComplex>(par, z1, z2, std::nullopt);
          return out.emit(json{{"intersection_count", cnt}});
        }
        SurdComplex eta = surd_from_json(parse_json_arg(arr_eta));
        int cnt = intersection_count<SurdComplex>(par, z1, z2, std::optional<SurdComplex>(eta));
        json o;
        o["intersection_count"] = cnt;
        if (cnt == 5) {
          auto sg = slice_points(par, z1, z2, eta);
          json ps = json::array();
          for (int i = 0; i < 4; ++i) ps.push_back(to_json(sg.p[i]));
          o["p"] = std::move(ps);
        }
        return out.emit(std::move(o));
      }
      ArrangementParam<cplx> par{cplx_from_json(parse_json_arg(arr_param[0])),
                                 cplx_from_json(parse_json_arg(arr_param[1]))};
      if (arr_check->parsed())
        return out.emit(json{{"in_P", in_parameter_space(par.zeta1, par.zeta2, tol)}});
      if (arr_qtable->parsed()) {
        json o = json::array();
        for (const auto& [ij, p] : intersections_q(par, tol)) {
          json lift = json::array();
          for (int i = 0; i < 3; ++i) lift.push_back(to_json(p.lift()(i)));
          o.push_back(json{{"i", ij.first}, {"j", ij.second}, {"lift", std::move(lift)}});
        }
        return out.emit(json{{"q", std::move(o)}},
                        arrangement_svg(par.zeta1.real(), par.zeta2.real()));
      }
      cplx z1 = cplx_from_json(parse_json_arg(arr_z.at(0)));
      cplx z2 = cplx_from_json(parse_json_arg(arr_z.at(1)));
      std::optional<cplx> eta;
      if (arr_eta != "inf") eta = cplx_from_json(parse_json_arg(arr_eta));
      int cnt = intersection_count<cplx>(par, z1, z2, eta, tol);
      return out.emit(json{{"intersection_count", cnt}});
    }

    if (arr_norm->parsed()) {
      out.manifest.command = "arrange normalize";
      json jl = parse_json_arg(arr_lines);
      if (!jl.is_array() || jl.size() != 4)
        return fail(2, "usage", "--lines expects 4 lines, each [[lift],[lift]]");
      std::vector<ProjSubspaceX> lines;
      for (const auto& l : jl) {
        MatX pts = matx_from_json(l);
        MatX basis = pts.transpose();
        lines.emplace_back(basis, tol);
      }
      auto [g, par] = normalize_arrangement<cplx>(lines, tol);
      return out.emit(json{{"transform", to_json(g.matrix())},
                           {"zeta1", to_json(par.zeta1)},
                           {"zeta2", to_json(par.zeta2)}});
    }

    if (count_cmd->parsed()) {
      out.manifest.command = "count";
      FuchsianSpec spec = count_spec == "reference"
                              ? FuchsianSpec::reference_rank4(6.0)
                              : fuchsian_from_json(parse_json_arg(count_spec));
      cplx z = count_base.empty() ? cplx(0.1, 0.05) : cplx_from_json(parse_json_arg(count_base));
      cplx w = count_w.empty() ? z : cplx_from_json(parse_json_arg(count_w));
      OrbitTable t = orbit_enumerate(spec, z, w, count_bound, tol);
      if (count_orbit->parsed()) {
        json o;
        o["rows"] = t.rows.size();
        o["horizon"] = t.horizon();
        if (!count_csv.empty()) {
          std::ofstream f(count_csv);
          f << "word,re,im,distance\n";
          for (const auto& r : t.rows)
            f << word_letters(r.word, t.num_gens) << "," << r.image.real() << ","
              << r.image.imag() << "," << r.distance << "\n";
        }
        return out.emit(std::move(o));
      }
      if (count_series->parsed()) {
        SeriesResult s = poincare_series(t, count_s);
        return out.emit(json{{"partial_sum", s.partial_sum},
                             {"tail_bound", s.tail_bound},
                             {"per_letter_gap", s.per_letter_gap}});
      }
      if (count_delta->parsed()) {
        DeltaEstimate d = critical_exponent(t);
        return out.emit(json{{"limsup", d.limsup_estimate},
                             {"bisection", d.bisection_estimate},
                             {"spread", d.spread}});
      }
      AtomMeasure m = ps_atoms(spec, t, count_s);
      return out.emit(json{{"atoms", m.atoms.size()},
                           {"total", m.total},
                           {"prenormalizer", m.prenormalizer}});
    }

    if (corpus_list->parsed()) {
      out.manifest.command = "corpus list";
      return out.emit(json{{"entries", corpus_names()}});
    }
    if (corpus_run_cmd->parsed()) {
      out.manifest.command = "corpus run " + corpus_name;
      std::string svg;
      json res = corpus_run(corpus_name, &svg);
      return out.emit(std::move(res), svg);
    }
  } catch (const BadInputError& e) {
    return fail(2, "input", e.what());
  } catch (const json::exception& e) {
    return fail(2, "json", e.what());
  } catch (const UnresolvedFlagsError& e) {
    return fail(3, "unresolved-flags", e.what());
  } catch (const NoLimitError& e) {
    return fail(3, "no-limit", e.what());
  } catch (const DivergedError& e) {
    return fail(3, "diverged", e.what());
  } catch (const UnsupportedExactCubicError& e) {
    return fail(3, "unsupported-exact-cubic", e.what());
  } catch (const NeedHintError& e) {
    return fail(3, "need-hint", e.what());
  } catch (const MixedSurdError& e) {
    return fail(2, "mixed-surd", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "input", e.what());
  } catch (const std::runtime_error& e) {
    return fail(3, "numeric", e.what());
  }
  return fail(2, "usage", "no subcommand matched");
}

int cli_run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_run(args);
}

}  // namespace projdyn
