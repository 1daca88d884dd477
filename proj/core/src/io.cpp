#include "rsma/io.hpp"

namespace rsma {

json matrix_to_json(const MatC& m) {
  json v = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      v.push_back(m(r, c).real());
      v.push_back(m(r, c).imag());
    }
  return json{{"r", m.rows()}, {"c", m.cols()}, {"v", std::move(v)}};
}

MatC matrix_from_json(const json& j) {
  const Eigen::Index rows = j.at("r"), cols = j.at("c");
  const auto& v = j.at("v");
  MatC m(rows, cols);
  std::size_t at = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = v.at(at++), im = v.at(at++);
      m(r, c) = cplx(re, im);
    }
  return m;
}

void to_json(json& j, const GeometryModel& g) {
  j = json{{"bs_pos", g.bs_pos},
           {"ris_pos", g.ris_pos},
           {"drop_center", g.drop_center},
           {"drop_radius", g.drop_radius},
           {"pl_exp_direct", g.pl_exp_direct},
           {"pl_exp_ris", g.pl_exp_ris},
           {"ref_loss_db", g.ref_loss_db},
           {"noise_floor_db", g.noise_floor_db},
           {"rician_k", g.rician_k}};
}

void from_json(const json& j, GeometryModel& g) {
  j.at("bs_pos").get_to(g.bs_pos);
  j.at("ris_pos").get_to(g.ris_pos);
  j.at("drop_center").get_to(g.drop_center);
  j.at("drop_radius").get_to(g.drop_radius);
  j.at("pl_exp_direct").get_to(g.pl_exp_direct);
  j.at("pl_exp_ris").get_to(g.pl_exp_ris);
  j.at("ref_loss_db").get_to(g.ref_loss_db);
  j.at("noise_floor_db").get_to(g.noise_floor_db);
  j.at("rician_k").get_to(g.rician_k);
}

void to_json(json& j, const NetworkConfig& cfg) {
  j = json{{"L", cfg.L},           {"K", cfg.K},
           {"M", cfg.M},           {"N_bs", cfg.N_bs},
           {"N_u", cfg.N_u},       {"N_ris", cfg.N_ris},
           {"P", cfg.P},           {"sigma2", cfg.sigma2},
           {"n", cfg.n},           {"eps_c", cfg.eps_c},
           {"eps_p", cfg.eps_p},   {"omega", cfg.omega},
           {"tau", cfg.tau},       {"alpha", cfg.alpha},
           {"lambda", cfg.lambda}, {"p_c", cfg.p_c},
           {"eta", cfg.eta},       {"ris_power", cfg.ris_power},
           {"geometry", cfg.geometry},
           {"feasibility_set",
            cfg.feasibility_set == RisSet::UnitModulus ? "unit_modulus" : "unit_disc"}};
}

void from_json(const json& j, NetworkConfig& cfg) {
  j.at("L").get_to(cfg.L);
  j.at("K").get_to(cfg.K);
  j.at("M").get_to(cfg.M);
  j.at("N_bs").get_to(cfg.N_bs);
  j.at("N_u").get_to(cfg.N_u);
  j.at("N_ris").get_to(cfg.N_ris);
  j.at("P").get_to(cfg.P);
  j.at("sigma2").get_to(cfg.sigma2);
  j.at("n").get_to(cfg.n);
  j.at("eps_c").get_to(cfg.eps_c);
  j.at("eps_p").get_to(cfg.eps_p);
  j.at("omega").get_to(cfg.omega);
  j.at("tau").get_to(cfg.tau);
  if (j.contains("alpha")) j.at("alpha").get_to(cfg.alpha);
  if (j.contains("lambda")) j.at("lambda").get_to(cfg.lambda);
  j.at("p_c").get_to(cfg.p_c);
  j.at("eta").get_to(cfg.eta);
  j.at("ris_power").get_to(cfg.ris_power);
  j.at("geometry").get_to(cfg.geometry);
  cfg.feasibility_set = j.at("feasibility_set").get<std::string>() == "unit_modulus"
                            ? RisSet::UnitModulus
                            : RisSet::UnitDisc;
}

void to_json(json& j, const PrecoderSet& p) {
  json common = json::array(), priv = json::array();
  for (const auto& w : p.common) common.push_back(matrix_to_json(w));
  for (const auto& cell : p.priv) {
    json row = json::array();
    for (const auto& w : cell) row.push_back(matrix_to_json(w));
    priv.push_back(std::move(row));
  }
  j = json{{"common", std::move(common)},
           {"priv", std::move(priv)},
           {"single_stream", p.stream_mode == StreamMode::SingleStream}};
}

void from_json(const json& j, PrecoderSet& p) {
  p.common.clear();
  p.priv.clear();
  for (const auto& w : j.at("common")) p.common.push_back(matrix_from_json(w));
  for (const auto& cell : j.at("priv")) {
    std::vector<MatC> row;
    for (const auto& w : cell) row.push_back(matrix_from_json(w));
    p.priv.push_back(std::move(row));
  }
  p.stream_mode =
      j.at("single_stream").get<bool>() ? StreamMode::SingleStream : StreamMode::Full;
}

void to_json(json& j, const RISPhases& r) {
  json ups = json::array();
  for (const auto& u : r.upsilon) ups.push_back(matrix_to_json(u));
  j = json{{"upsilon", std::move(ups)},
           {"set", r.feasibility_set == RisSet::UnitModulus ? "unit_modulus" : "unit_disc"}};
}

void from_json(const json& j, RISPhases& r) {
  r.upsilon.clear();
  for (const auto& u : j.at("upsilon")) r.upsilon.push_back(matrix_from_json(u));
  r.feasibility_set = j.at("set").get<std::string>() == "unit_modulus"
                          ? RisSet::UnitModulus
                          : RisSet::UnitDisc;
}

void to_json(json& j, const CommonRateSplit& s) { j = json{{"t", s.t}}; }
void from_json(const json& j, CommonRateSplit& s) { j.at("t").get_to(s.t); }

void to_json(json& j, const ChannelSet& ch) {
  auto dump3 = [](const std::vector<std::vector<std::vector<MatC>>>& a) {
    json out = json::array();
    for (const auto& x : a) {
      json jx = json::array();
      for (const auto& y : x) {
        json jy = json::array();
        for (const auto& m : y) jy.push_back(matrix_to_json(m));
        jx.push_back(std::move(jy));
      }
      out.push_back(std::move(jx));
    }
    return out;
  };
  json gbr = json::array();
  for (const auto& row : ch.Gbr) {
    json jr = json::array();
    for (const auto& m : row) jr.push_back(matrix_to_json(m));
    gbr.push_back(std::move(jr));
  }
  j = json{{"L", ch.L},          {"K", ch.K},          {"M", ch.M},
           {"seed", ch.seed},    {"F", dump3(ch.F)},   {"Gru", dump3(ch.Gru)},
           {"Gbr", std::move(gbr)}};
}

void from_json(const json& j, ChannelSet& ch) {
  auto load3 = [](const json& a) {
    std::vector<std::vector<std::vector<MatC>>> out;
    for (const auto& x : a) {
      std::vector<std::vector<MatC>> ox;
      for (const auto& y : x) {
        std::vector<MatC> oy;
        for (const auto& m : y) oy.push_back(matrix_from_json(m));
        ox.push_back(std::move(oy));
      }
      out.push_back(std::move(ox));
    }
    return out;
  };
  j.at("L").get_to(ch.L);
  j.at("K").get_to(ch.K);
  j.at("M").get_to(ch.M);
  j.at("seed").get_to(ch.seed);
  ch.F = load3(j.at("F"));
  ch.Gru = load3(j.at("Gru"));
  ch.Gbr.clear();
  for (const auto& row : j.at("Gbr")) {
    std::vector<MatC> r;
    for (const auto& m : row) r.push_back(matrix_from_json(m));
    ch.Gbr.push_back(std::move(r));
  }
}

void to_json(json& j, const ConvergenceTrace& t) {
  j = json{{"objective", t.objective},
           {"after_w_update", t.after_w_update},
           {"after_ris_update", t.after_ris_update},
           {"gda_mu", t.gda_mu},
           {"wall_ms", t.wall_ms},
           {"subproblem_newton_iters", t.subproblem_newton_iters},
           {"stop_reason", t.stop_reason}};
}

void from_json(const json& j, ConvergenceTrace& t) {
  j.at("objective").get_to(t.objective);
  j.at("after_w_update").get_to(t.after_w_update);
  j.at("after_ris_update").get_to(t.after_ris_update);
  j.at("gda_mu").get_to(t.gda_mu);
  j.at("wall_ms").get_to(t.wall_ms);
  j.at("subproblem_newton_iters").get_to(t.subproblem_newton_iters);
  j.at("stop_reason").get_to(t.stop_reason);
}

void to_json(json& j, const Allocation& a) {
  j = json{{"precoders", a.precoders}, {"ris", a.ris},       {"split", a.split},
           {"rates", a.rates},         {"ees", a.ees},       {"objective", a.objective},
           {"trace", a.trace}};
}

void from_json(const json& j, Allocation& a) {
  j.at("precoders").get_to(a.precoders);
  j.at("ris").get_to(a.ris);
  j.at("split").get_to(a.split);
  j.at("rates").get_to(a.rates);
  j.at("ees").get_to(a.ees);
  j.at("objective").get_to(a.objective);
  j.at("trace").get_to(a.trace);
}

} // namespace rsma
