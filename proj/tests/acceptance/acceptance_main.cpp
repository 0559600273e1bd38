// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one pass/fail line per criterion, all tolerances fixed
// in code. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "aqcp/conformal/aqcp.hpp"
#include "aqcp/data/datagen.hpp"
#include "aqcp/harness/experiments.hpp"
#include "aqcp/model/io.hpp"
#include "aqcp/model/training.hpp"
#include "aqcp/oracle/oracle.hpp"
#include "aqcp/util/parallel.hpp"

using namespace aqcp;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// Shared setup: the trained model used by criteria 2, 6 and 7.
struct Setup {
  model::PqcModel pqc;
  double train_seconds = 0.0;
};

Setup train_model() {
  Setup setup;
  harness::ExperimentConfig config;
  config.seed = 101;
  config.n_train = 1000;
  config.epochs = 60;
  config.batch_size = 50;
  config.lr = 0.01;
  config.threads = 2;
  setup.pqc = harness::fresh_model(config);
  const auto t0 = std::chrono::steady_clock::now();
  harness::train_experiment(config, setup.pqc);
  setup.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return setup;
}

// --------------------------------------------------------------------------
// Criterion 1: deterministic AQCP bound at alpha=0.1, gamma=0.03, N=9900,
// on a real harness run and on adversarial synthetic score streams.
// --------------------------------------------------------------------------
Check criterion_1(const Setup& setup) {
  Check check;
  const double alpha = 0.1, gamma = 0.03;
  const long n = 9900;
  const double bound_value = 0.0031313;  // (max{0.1,0.9}+0.03)/(9900*0.03)
  check.require(conformal::coverage_bound(alpha, gamma, n) <= bound_value + 1e-7,
                "bound formula mismatch");

  // real harness run: stationary noise, kNN score, M=100
  harness::ExperimentConfig config;
  config.seed = 808;
  config.n_cal = 100;
  config.n_test = static_cast<int>(n);
  config.m_shots = 100;
  config.noise_p = 0.01;
  config.readout_p = 0.02;
  config.threads = 2;
  const auto split = data::generate(config.seed, 0, config.n_cal, config.n_test);
  std::vector<data::LabelledPoint> streamed = split.calibration;
  streamed.insert(streamed.end(), split.test.begin(), split.test.end());
  const auto shots = harness::shot_stream(config, setup.pqc, streamed, config.m_shots);
  const auto spec = harness::make_score_spec(config, "knn");
  const auto cell =
      harness::run_cell(shots, split.calibration, split.test, spec, gamma, alpha,
                        harness::make_grid(config), 17);
  const double real_dev = std::abs((1.0 - cell.summary.avg_coverage) - alpha);
  check.require(real_dev <= bound_value,
                "harness run deviation " + fmt("%.6f", real_dev));
  check.note("harness |avg err - 0.1| = " + fmt("%.2e", real_dev));

  // adversarial synthetic streams through the same update machinery
  std::vector<double> cal(100);
  for (int i = 0; i < 100; ++i) cal[static_cast<std::size_t>(i)] = 0.01 * i;
  const auto escalate = conformal::run_aqcp_on_scores(
      cal, [](long i) { return 1000.0 + static_cast<double>(i); }, n, alpha, gamma);
  const double dev_up = std::abs(escalate.average_error() - alpha);
  check.require(dev_up <= bound_value, "escalating stream " + fmt("%.6f", dev_up));
  const auto vanish = conformal::run_aqcp_on_scores(
      cal, [](long i) { return -1.0 - static_cast<double>(i) * 1e-6; }, n, alpha, gamma);
  const double dev_down = std::abs(vanish.average_error() - alpha);
  check.require(dev_down <= bound_value, "vanishing stream " + fmt("%.6f", dev_down));
  check.note("adversarial max dev = " + fmt("%.2e", std::max(dev_up, dev_down)));
  return check;
}

// --------------------------------------------------------------------------
// Criterion 2: exchangeable-regime split-CP coverage, 200 trials x 500 test
// points, n=100 calibration; mean in [0.9, 0.9 + 1/101] +- 3 MC SE.
// --------------------------------------------------------------------------
Check criterion_2(const Setup& setup) {
  Check check;
  const int trials = 200, n_cal = 100, n_test = 500, m = 50;
  const qsim::NoiseSchedule schedule(qsim::ChannelFamily::Depolarising,
                                     qsim::ParamFn::constant(0.01),
                                     qsim::ParamFn::constant(0.02));
  conformal::ScoreSpec spec;
  spec.variant = conformal::ScoreVariant::Knn;

  std::vector<double> coverage(trials);
  util::parallel_for(
      trials,
      [&](std::size_t trial) {
        const std::uint64_t seed = util::derive_seed(555, trial);
        const auto split = data::generate(seed, 0, n_cal, n_test);
        std::vector<data::LabelledPoint> streamed = split.calibration;
        streamed.insert(streamed.end(), split.test.begin(), split.test.end());
        const auto shots =
            harness::collect_shots(setup.pqc, schedule, model::SamplerMode::DensityExact,
                                   streamed, m, 0.001, 0.1, seed, 1);
        std::vector<double> cal_scores;
        for (int i = 0; i < n_cal; ++i) {
          const conformal::Tiebreak tb{seed, static_cast<std::uint64_t>(i),
                                       spec.tiebreak_sigma};
          cal_scores.push_back(
              conformal::score(spec, streamed[i].x, streamed[i].y, shots[i], tb));
        }
        const double lambda = conformal::calibration_threshold(cal_scores, 0.1);
        int covered = 0;
        for (int j = 0; j < n_test; ++j) {
          const std::size_t idx = static_cast<std::size_t>(n_cal + j);
          const conformal::Tiebreak tb{seed, idx, spec.tiebreak_sigma};
          covered += conformal::score(spec, streamed[idx].x, streamed[idx].y,
                                      shots[idx], tb) <= lambda;
        }
        coverage[trial] = static_cast<double>(covered) / n_test;
      },
      2);

  double mean = 0.0;
  for (double c : coverage) mean += c;
  mean /= trials;
  double var = 0.0;
  for (double c : coverage) var += (c - mean) * (c - mean);
  const double se = std::sqrt(var / (trials - 1)) / std::sqrt(static_cast<double>(trials));
  const double lo = 0.9 - 3.0 * se;
  const double hi = 0.9 + 1.0 / 101.0 + 3.0 * se;
  check.require(mean >= lo && mean <= hi,
                "mean coverage " + fmt("%.5f", mean) + " outside [" + fmt("%.5f", lo) +
                    ", " + fmt("%.5f", hi) + "]");
  check.note("mean coverage " + fmt("%.5f", mean) + " (se " + fmt("%.5f", se) + ")");
  return check;
}

// --------------------------------------------------------------------------
// Criterion 3: unitarity <= 1e-12, channel completeness <= 1e-12, trace
// drift <= 1e-9 over 200-operation random 3-qubit circuits, 1000 cases.
// --------------------------------------------------------------------------
Check criterion_3() {
  Check check;
  util::Rng rng(33);
  double worst_unitarity = 0.0;
  for (int i = 0; i < 300; ++i) {
    const int q = static_cast<int>(rng.next_u64() % 3);
    const double angle = rng.uniform(-6.3, 6.3);
    for (const auto& g : {qsim::Gate::rx(q, angle), qsim::Gate::ry(q, angle),
                          qsim::Gate::rz(q, angle), qsim::Gate::cz(0, 2),
                          qsim::Gate::cx(1, 0)})
      worst_unitarity = std::max(worst_unitarity,
                                 qsim::unitarity_error(qsim::gate_matrix(g, 3)));
  }
  check.require(worst_unitarity <= 1e-12,
                "unitarity " + fmt("%.2e", worst_unitarity));

  double worst_completeness = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double p = static_cast<double>(i) / 100.0;
    for (auto family :
         {qsim::ChannelFamily::Depolarising, qsim::ChannelFamily::PhaseFlip,
          qsim::ChannelFamily::AmplitudeDamping})
      worst_completeness = std::max(
          worst_completeness, qsim::make_channel(family, p).completeness_error());
  }
  check.require(worst_completeness <= 1e-12,
                "completeness " + fmt("%.2e", worst_completeness));

  std::vector<double> drift(1000, 0.0);
  util::parallel_for(
      1000,
      [&](std::size_t case_index) {
        util::Rng local(util::derive_seed(34, case_index));
        qsim::DensityMatrix rho(3);
        for (int op = 0; op < 200; ++op) {
          const int q = static_cast<int>(local.next_u64() % 3);
          if (op % 2 == 0) {
            const int kind = static_cast<int>(local.next_u64() % 3);
            const double angle = local.uniform(-3.1, 3.1);
            const qsim::Gate g = kind == 0   ? qsim::Gate::rx(q, angle)
                                 : kind == 1 ? qsim::Gate::ry(q, angle)
                                             : qsim::Gate::rz(q, angle);
            rho = qsim::apply_unitary_to_density(rho, g);
          } else {
            const auto family =
                static_cast<qsim::ChannelFamily>(local.next_u64() % 3);
            rho = qsim::apply_channel(
                rho, qsim::make_channel(family, local.uniform(0.0, 1.0)), q);
          }
        }
        drift[case_index] = rho.trace_error();
      },
      2);
  double worst_drift = 0.0;
  for (double d : drift) worst_drift = std::max(worst_drift, d);
  check.require(worst_drift <= 1e-9, "trace drift " + fmt("%.2e", worst_drift));
  check.note("worst unitarity " + fmt("%.1e", worst_unitarity) + ", completeness " +
             fmt("%.1e", worst_completeness) + ", trace drift " +
             fmt("%.1e", worst_drift));
  return check;
}

// --------------------------------------------------------------------------
// Criterion 4: parameter-shift and encoder backprop vs central finite
// differences, relative error <= 1e-6 on 100 random instances each.
// --------------------------------------------------------------------------
Check criterion_4() {
  Check check;
  util::Rng rng(271828);
  double worst_shift = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int qubits = 2 + static_cast<int>(rng.next_u64() % 2);
    const int layers = 1 + static_cast<int>(rng.next_u64() % 2);
    const model::AnsatzConfig config{qubits, layers, model::Entangler::Linear};
    model::VectorXd angles(config.parameter_count());
    for (Eigen::Index j = 0; j < angles.size(); ++j) angles(j) = rng.uniform(-2.5, 2.5);
    const int cell = static_cast<int>(rng.next_u64() % (1ull << qubits));

    const model::VectorXd shift = model::cell_probability_gradient(angles, config, cell);
    model::VectorXd fd(angles.size());
    for (Eigen::Index j = 0; j < angles.size(); ++j) {
      model::VectorXd up = angles, down = angles;
      up(j) += 1e-5;
      down(j) -= 1e-5;
      fd(j) = (model::noiseless_probabilities(up, config)[static_cast<std::size_t>(cell)] -
               model::noiseless_probabilities(down, config)[static_cast<std::size_t>(cell)]) /
              2e-5;
    }
    const double denom = std::max(shift.norm(), fd.norm());
    if (denom > 0.0) worst_shift = std::max(worst_shift, (shift - fd).norm() / denom);
  }
  check.require(worst_shift <= 1e-6, "parameter shift " + fmt("%.2e", worst_shift));

  double worst_encoder = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    model::AngleEncoder enc = model::AngleEncoder::random_init(
        {1, 4, 5, 3}, util::derive_seed(999, trial));
    const double x = rng.uniform(-8.0, 8.0);
    model::VectorXd upstream(3);
    for (int i = 0; i < 3; ++i) upstream(i) = rng.uniform(-1.0, 1.0);
    model::AngleEncoder::ForwardTrace trace;
    enc.forward(x, &trace);
    const model::EncoderGradients grads = enc.backward(trace, upstream);

    auto scalar = [&](const model::AngleEncoder& e) { return upstream.dot(e.forward(x)); };
    double num = 0.0, denom = 0.0;
    const double h = 1e-6;
    for (std::size_t l = 0; l < enc.num_layers(); ++l) {
      for (Eigen::Index r = 0; r < enc.weights()[l].rows(); ++r)
        for (Eigen::Index c = 0; c < enc.weights()[l].cols(); ++c) {
          model::AngleEncoder up = enc, down = enc;
          up.weights()[l](r, c) += h;
          down.weights()[l](r, c) -= h;
          const double fd = (scalar(up) - scalar(down)) / (2.0 * h);
          num += (fd - grads.weights[l](r, c)) * (fd - grads.weights[l](r, c));
          denom += fd * fd;
        }
    }
    if (denom > 0.0)
      worst_encoder = std::max(worst_encoder, std::sqrt(num) / std::sqrt(denom));
  }
  check.require(worst_encoder <= 1e-6, "encoder backprop " + fmt("%.2e", worst_encoder));
  check.note("worst shift rel err " + fmt("%.1e", worst_shift) + ", encoder " +
             fmt("%.1e", worst_encoder));
  return check;
}

// --------------------------------------------------------------------------
// Criterion 5: optimal-set length 0.32897 +- 1e-3 for separated modes at
// alpha=0.1; optimal-set mass 0.9 +- 1e-4 for all tested x (closed-form
// integration route).
// --------------------------------------------------------------------------
Check criterion_5() {
  Check check;
  const oracle::TaskDensity task;
  const auto separated = oracle::optimal_set(task, 3.0, 0.1);
  check.require(std::abs(separated.total_length() - 0.32897) <= 1e-3,
                "length " + fmt("%.6f", separated.total_length()));
  check.note("separated-mode length " + fmt("%.5f", separated.total_length()));

  util::Rng rng(51);
  double worst_mass = 0.0;
  std::vector<double> xs{0.0, 3.0, -7.3, 9.5};
  for (int i = 0; i < 21; ++i) xs.push_back(rng.uniform(-10.0, 10.0));
  for (double x : xs) {
    const auto set = oracle::optimal_set(task, x, 0.1);
    double mass = 0.0;
    for (const auto& [lo, hi] : set.intervals) mass += task.interval_mass(x, lo, hi);
    worst_mass = std::max(worst_mass, std::abs(mass - 0.9));
  }
  check.require(worst_mass <= 1e-4, "mass deviation " + fmt("%.2e", worst_mass));
  check.note("worst mass deviation " + fmt("%.1e", worst_mass));
  return check;
}

// --------------------------------------------------------------------------
// Criterion 6: efficiency shape across ten log-spaced shot counts at
// N_test=2000: (a) HDR and KDE sizes non-increasing within MC tolerance,
// (b) Euc >= 1.3x HDR at M=1000, (c) every coverage within the bound of 0.9.
// --------------------------------------------------------------------------
Check criterion_6(const Setup& setup) {
  Check check;
  harness::ExperimentConfig config;
  config.seed = 7000;
  config.n_cal = 100;
  config.n_test = 2000;
  config.noise_p = 0.01;
  config.readout_p = 0.02;
  config.threads = 2;

  const auto split = data::generate(config.seed, 0, config.n_cal, config.n_test);
  std::vector<data::LabelledPoint> streamed = split.calibration;
  streamed.insert(streamed.end(), split.test.begin(), split.test.end());
  const auto grid = harness::make_grid(config);
  const double gamma = 0.03, alpha = 0.1;
  const double bound = conformal::coverage_bound(alpha, gamma, config.n_test);

  struct MeasuredCell {
    double avg = 0.0, se = 0.0, coverage = 0.0;
  };
  std::map<std::string, std::vector<MeasuredCell>> cells;
  for (std::size_t mi = 0; mi < config.m_list.size(); ++mi) {
    const int m = config.m_list[mi];
    const auto shots = harness::shot_stream(config, setup.pqc, streamed, m);
    for (const std::string name : {"euc", "knn", "kde", "hdr"}) {
      const auto spec = harness::make_score_spec(config, name);
      const auto cell = harness::run_cell(shots, split.calibration, split.test, spec,
                                          gamma, alpha,
                                          grid, util::derive_seed(config.seed, mi, 7));
      MeasuredCell measured;
      measured.avg = cell.summary.avg_set_size;
      measured.coverage = cell.summary.avg_coverage;
      double var = 0.0;
      for (const auto& r : cell.records)
        var += (r.set_size - measured.avg) * (r.set_size - measured.avg);
      measured.se = std::sqrt(var / (cell.records.size() - 1)) /
                    std::sqrt(static_cast<double>(cell.records.size()));
      cells[name].push_back(measured);

      if (std::abs(measured.coverage - 0.9) > bound)
        check.require(false, name + " M=" + std::to_string(m) + " coverage " +
                                 fmt("%.4f", measured.coverage));
    }
  }

  for (const std::string name : {"hdr", "kde"}) {
    const auto& row = cells[name];
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
      const double tol = 3.0 * (row[i].se + row[i + 1].se);
      if (row[i + 1].avg > row[i].avg + tol)
        check.require(false, name + " size increases at step " + std::to_string(i) +
                                 " (" + fmt("%.4f", row[i].avg) + " -> " +
                                 fmt("%.4f", row[i + 1].avg) + ")");
    }
  }

  const double euc_1000 = cells["euc"].back().avg;
  const double hdr_1000 = cells["hdr"].back().avg;
  check.require(euc_1000 >= 1.3 * hdr_1000,
                "euc/hdr ratio " + fmt("%.3f", euc_1000 / hdr_1000));
  check.note("euc/hdr at M=1000: " + fmt("%.3f", euc_1000 / hdr_1000) + " (" +
             fmt("%.3f", euc_1000) + "/" + fmt("%.3f", hdr_1000) + ")");
  return check;
}

// --------------------------------------------------------------------------
// Criterion 7: under the pinned drift schedule, the median-over-10-seeds RMS
// deviation of the 500-window moving coverage from 0.9 is strictly smaller
// for gamma=0.03 than for gamma=0, for all four score functions.
// --------------------------------------------------------------------------
Check criterion_7(const Setup& setup) {
  Check check;
  const int seeds = 10, n_cal = 100, n_test = 3000, m = 100, window = 500;
  const char* names[4] = {"euc", "knn", "kde", "hdr"};
  std::vector<std::array<double, 2>> rms[4];
  for (auto& r : rms) r.resize(seeds);

  harness::ExperimentConfig config;
  config.n_cal = n_cal;
  config.n_test = n_test;
  config.m_shots = m;
  config.window = window;
  config.noise_kind = "drift_burst";
  config.noise_p0 = 0.01;
  config.noise_p1 = 0.15;
  config.noise_burst_p = 0.4;
  config.noise_burst_width = 30.0;
  config.readout_p = 0.02;
  config.sampler = "trajectory";
  const auto grid = harness::make_grid(config);

  for (int seed_index = 0; seed_index < seeds; ++seed_index) {
    config.seed = 1000 + static_cast<std::uint64_t>(seed_index);
    const auto split = data::generate(config.seed, 0, n_cal, n_test);
    std::vector<data::LabelledPoint> streamed = split.calibration;
    streamed.insert(streamed.end(), split.test.begin(), split.test.end());
    config.threads = 2;
    const auto shots = harness::shot_stream(config, setup.pqc, streamed, m);
    util::parallel_for(
        4,
        [&](std::size_t si) {
          const auto spec = harness::make_score_spec(config, names[si]);
          for (int gi = 0; gi < 2; ++gi) {
            const double gamma = gi == 0 ? 0.0 : 0.03;
            const auto cell = harness::run_cell(
                shots, split.calibration, split.test, spec, gamma, 0.1, grid,
                util::derive_seed(config.seed, gi + 1, si + 1));
            rms[si][static_cast<std::size_t>(seed_index)][static_cast<std::size_t>(gi)] =
                harness::coverage_rms_deviation(cell.records, window, 0.9);
          }
        },
        2);
  }

  for (int si = 0; si < 4; ++si) {
    std::vector<double> rms0, rms1;
    for (int s = 0; s < seeds; ++s) {
      rms0.push_back(rms[si][static_cast<std::size_t>(s)][0]);
      rms1.push_back(rms[si][static_cast<std::size_t>(s)][1]);
    }
    std::sort(rms0.begin(), rms0.end());
    std::sort(rms1.begin(), rms1.end());
    const double med0 = 0.5 * (rms0[4] + rms0[5]);
    const double med1 = 0.5 * (rms1[4] + rms1[5]);
    check.require(med1 < med0, std::string(names[si]) + " medians " +
                                   fmt("%.4f", med1) + " !< " + fmt("%.4f", med0));
    check.note(std::string(names[si]) + " " + fmt("%.4f", med0) + "->" +
               fmt("%.4f", med1));
  }
  return check;
}

// --------------------------------------------------------------------------
// Criterion 8: S2 Gaussian residual <= 1e-4 at 50 sampled (x, y); S1
// equivalence true for a Gaussian sampler and false for the separated
// mixture.
// --------------------------------------------------------------------------
Check criterion_8() {
  Check check;
  const oracle::TaskDensity task;
  util::Rng rng(88);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(-10.0, 10.0);
    const double mu = task.mu(x);
    const double y = mu + rng.uniform(-4.0, 4.0) * task.sigma;
    worst = std::max(worst, oracle::check_s2_gaussian_residual(mu, task.sigma, y));
  }
  check.require(worst <= 1e-4, "S2 residual " + fmt("%.2e", worst));
  check.note("worst S2 residual " + fmt("%.1e", worst));

  const double gx = 2.0;
  const auto gaussian = [&](double y) {
    return oracle::normal_pdf((y - task.mu(gx)) / task.sigma) / task.sigma;
  };
  check.require(oracle::check_s1_equivalence(gaussian, -1.5, 1.5),
                "S1 should hold for the Gaussian model");
  const auto mixture = [&](double y) { return task.density(3.0, y); };
  check.require(!oracle::check_s1_equivalence(mixture, -1.5, 1.5),
                "S1 should fail for the separated mixture");
  return check;
}

// --------------------------------------------------------------------------
// Criterion 9: weighted CP reductions; equal weights reproduce unweighted
// thresholds exactly, zero weights yield full-grid sets.
// --------------------------------------------------------------------------
Check criterion_9() {
  Check check;
  util::Rng rng(909);
  for (double alpha : {0.05, 0.1, 0.2, 0.5}) {
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + static_cast<int>(rng.next_u64() % 120);
      std::vector<double> scores;
      for (int i = 0; i < n; ++i) scores.push_back(rng.uniform(-4.0, 4.0));
      conformal::WeightVector w;
      w.raw.assign(static_cast<std::size_t>(n), 1.0);
      if (conformal::weighted_threshold(scores, w, alpha) !=
          conformal::calibration_threshold(scores, alpha)) {
        check.require(false, "equal-weight mismatch at alpha " + fmt("%.2f", alpha));
        break;
      }
    }
  }

  model::ShotMultiset shots;
  shots.x = 0.0;
  for (int i = 0; i < 20; ++i) shots.records.push_back({0.0, 0, 0.1 * i - 1.0});
  conformal::ScoreSpec spec;
  spec.variant = conformal::ScoreVariant::Euc;
  const conformal::CandidateGrid grid;
  conformal::WeightVector zero;
  zero.raw.assign(5, 0.0);
  const std::vector<double> cal_scores{0.1, 0.2, 0.3, 0.4, 0.5};
  const auto set = conformal::weighted_prediction_set(
      cal_scores, zero, 0.0, shots, spec, 0.1, grid, conformal::Tiebreak{1, 0, 1e-4});
  check.require(set.count() == grid.points, "zero weights should fill the grid");
  check.note("equal-weight and zero-weight reductions exact");
  return check;
}

}  // namespace

int main() {
  std::printf("acceptance suite (2 threads)\n");
  const auto wall0 = std::chrono::steady_clock::now();
  const Setup setup = train_model();
  std::printf("setup: trained model (seed 101, 60 epochs, batch 50, lr 0.01) in %.0f s\n",
              setup.train_seconds);

  struct Entry {
    const char* name;
    std::function<Check()> run;
    double budget_seconds;  // 0 = no stated limit
  };
  const std::vector<Entry> entries{
      {"1 deterministic AQCP bound (alpha=0.1, gamma=0.03, N=9900)",
       [&] { return criterion_1(setup); }, 60.0},
      {"2 exchangeable-regime coverage (200 trials x 500 points)",
       [&] { return criterion_2(setup); }, 600.0},
      {"3 CPTP/unitarity suite (1000 random 3-qubit circuits)",
       [] { return criterion_3(); }, 0.0},
      {"4 gradient suite (parameter shift + encoder backprop)",
       [] { return criterion_4(); }, 0.0},
      {"5 oracle numbers (C* length and mass)", [] { return criterion_5(); }, 0.0},
      {"6 efficiency shape (10 shot counts, N_test=2000)",
       [&] { return criterion_6(setup); }, 1800.0},
      {"7 drift stabilisation (gamma contrast over 10 seeds)",
       [&] { return criterion_7(setup); }, 0.0},
      {"8 optimal-score checks (S1 equivalence, S2 residual)",
       [] { return criterion_8(); }, 0.0},
      {"9 weighted CP reductions", [] { return criterion_9(); }, 0.0},
  };

  bool all_ok = true;
  for (const auto& entry : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Check check = entry.run();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (entry.budget_seconds > 0.0 && seconds > entry.budget_seconds)
      check.require(false, "runtime " + fmt("%.0f", seconds) + " s over budget " +
                               fmt("%.0f", entry.budget_seconds) + " s");
    std::printf("[%s] criterion %s: %s (%.1f s)\n", check.ok ? "PASS" : "FAIL",
                entry.name, check.detail.c_str(), seconds);
    std::fflush(stdout);
    all_ok = all_ok && check.ok;
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  std::printf("%s (total %.0f s)\n", all_ok ? "ALL CRITERIA PASSED" : "CRITERIA FAILED",
              total);
  return all_ok ? 0 : 1;
}
