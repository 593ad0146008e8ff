#include "sopt/campaign.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace sopt {

std::string CorpusEntry::file_name() const {
  return std::to_string(src) + "_" + std::to_string(occurrence) + "_" +
         std::string(to_string(kind)) + ".bin";
}

Metrics compute_metrics(std::span<const InversionOutcome> outcomes,
                        std::chrono::nanoseconds elapsed) {
  Metrics m;
  m.targets = outcomes.size();
  std::set<Address> sites;
  for (const InversionOutcome &o : outcomes) {
    m.sat_branches += o.counted_sat;
    m.correct_branches += o.counted_correct;
    if (o.counted_correct)
      sites.insert(o.src);
    for (const InversionQuery &q : o.issued)
      ++m.per_kind[static_cast<std::size_t>(q.kind)].queries;
    for (std::size_t k = 0; k < kNumQueryKinds; ++k)
      if (o.verdicts[k] == SolveStatus::Sat)
        ++m.per_kind[k].sat;
    for (const GeneratedInput &g : o.inputs) {
      KindStats &ks = m.per_kind[static_cast<std::size_t>(g.kind)];
      ++ks.inputs;
      if (g.correctness == Correctness::Correct)
        ++ks.correct_inputs;
    }
  }
  m.correct_sites = sites.size();
  m.accuracy = m.sat_branches == 0
                   ? 0.0
                   : static_cast<double>(m.correct_branches) / static_cast<double>(m.sat_branches);
  const double minutes = std::chrono::duration<double, std::ratio<60>>(elapsed).count();
  m.speed = minutes > 0.0 ? static_cast<double>(m.correct_branches) / minutes : 0.0;
  return m;
}

CampaignResult invert_all(const Program &program, std::span<const std::uint8_t> seed,
                          const StrategyConfig &config) {
  CampaignResult result;
  result.predicate = run_concolic(program, seed, config.step_limit);
  const PathPredicate &pred = result.predicate;

  std::size_t count = pred.size();
  if (config.max_branches)
    count = std::min(count, *config.max_branches);

  const auto start = std::chrono::steady_clock::now();
  auto over_budget = [&] {
    return config.wall_budget &&
           std::chrono::steady_clock::now() - start >= *config.wall_budget;
  };

  std::vector<InversionOutcome> outcomes(count);
  std::vector<char> done(count, 0);
  if (config.jobs > 1) {
    // Distinct targets in parallel; each solver call stays on one thread.
#pragma omp parallel for num_threads(config.jobs) schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      if (over_budget())
        continue;
      const auto seq = static_cast<std::size_t>(i);
      outcomes[seq] = invert_target(pred, seq, config, Kernel::Serial);
      done[seq] = 1;
    }
  } else {
    for (std::size_t seq = 0; seq < count; ++seq) {
      if (over_budget())
        break;
      outcomes[seq] = invert_target(pred, seq, config, Kernel::Parallel);
      done[seq] = 1;
    }
  }

  std::chrono::nanoseconds elapsed = std::chrono::steady_clock::now() - start;
  for (std::size_t seq = 0; seq < count; ++seq) {
    if (!done[seq])
      continue;
    result.outcomes.push_back(std::move(outcomes[seq]));
  }
  if (config.clock == ClockKind::Logical) {
    std::size_t calls = 0;
    for (const InversionOutcome &o : result.outcomes)
      calls += o.issued.size();
    elapsed = std::chrono::milliseconds(calls);
  }

  for (InversionOutcome &o : result.outcomes) {
    validate_outcome(program, pred, o, config);
    for (const GeneratedInput &g : o.inputs)
      result.corpus.push_back({o.src, o.occurrence, g.kind, g.bytes});
  }

  CampaignReport &report = result.report;
  report.mode = config.mode;
  report.constraints = pred.size();
  report.elapsed = elapsed;
  report.metrics = compute_metrics(result.outcomes, elapsed);

  std::vector<Bytes> inputs{Bytes(seed.begin(), seed.end())};
  report.coverage_base = edge_coverage(program, inputs, config.step_limit);
  for (const CorpusEntry &e : result.corpus)
    inputs.push_back(e.bytes);
  report.coverage_with_generated = edge_coverage(program, inputs, config.step_limit);
  return result;
}

std::string format_report(const CampaignReport &report) {
  const Metrics &m = report.metrics;
  char buf[64];
  std::ostringstream out;
  out << "mode=" << to_string(report.mode) << '\n';
  out << "constraints=" << report.constraints << '\n';
  out << "targets=" << m.targets << '\n';
  out << "sat_branches=" << m.sat_branches << '\n';
  out << "correct_branches=" << m.correct_branches << '\n';
  out << "correct_sites=" << m.correct_sites << '\n';
  std::snprintf(buf, sizeof buf, "%.4f", m.accuracy);
  out << "accuracy=" << buf << '\n';
  std::snprintf(buf, sizeof buf, "%.2f", m.speed);
  out << "speed=" << buf << '\n';
  out << "elapsed_ms="
      << std::chrono::duration_cast<std::chrono::milliseconds>(report.elapsed).count() << '\n';
  for (QueryKind k :
       {QueryKind::Sliced, QueryKind::Optimistic, QueryKind::StrongOptimistic}) {
    const KindStats &ks = m.per_kind[static_cast<std::size_t>(k)];
    const std::string p(to_string(k));
    out << p << ".queries=" << ks.queries << '\n';
    out << p << ".sat=" << ks.sat << '\n';
    out << p << ".inputs=" << ks.inputs << '\n';
    out << p << ".correct_inputs=" << ks.correct_inputs << '\n';
  }
  out << "coverage_base=" << report.coverage_base << '\n';
  out << "coverage_with_generated=" << report.coverage_with_generated << '\n';
  return out.str();
}

std::string csv_header() { return "mode,correct,sat,accuracy,speed,coverage"; }

std::string csv_row(const CampaignReport &report) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.4f,%.2f,%zu",
                std::string(to_string(report.mode)).c_str(), report.metrics.correct_branches,
                report.metrics.sat_branches, report.metrics.accuracy, report.metrics.speed,
                report.coverage_with_generated);
  return buf;
}

void write_corpus(const std::filesystem::path &dir, std::span<const CorpusEntry> corpus) {
  std::filesystem::create_directories(dir);
  for (const CorpusEntry &e : corpus) {
    std::ofstream out(dir / e.file_name(), std::ios::binary);
    out.write(reinterpret_cast<const char *>(e.bytes.data()),
              static_cast<std::streamsize>(e.bytes.size()));
    if (!out)
      throw std::runtime_error("cannot write " + (dir / e.file_name()).string());
  }
}

namespace {

std::string coverage_label(StrategyMode mode) {
  switch (mode) {
  case StrategyMode::Default: return "Base";
  case StrategyMode::OptOnly: return "Opt";
  case StrategyMode::OptPlusSopt: return "Sopt";
  case StrategyMode::SoptOnly: return "SoptOnly";
  }
  return "?";
}

} // namespace

std::vector<CoverageRow> compare_configs(const Program &program,
                                         std::span<const std::uint8_t> seed,
                                         std::span<const StrategyConfig> configs) {
  std::vector<CoverageRow> rows;
  for (const StrategyConfig &config : configs) {
    CoverageRow row;
    row.label = coverage_label(config.mode);
    row.mode = config.mode;
    row.report = invert_all(program, seed, config).report;
    row.coverage = row.report.coverage_with_generated;
    if (!rows.empty() && rows.back().coverage > 0)
      row.growth = 100.0 * (static_cast<double>(row.coverage) -
                            static_cast<double>(rows.back().coverage)) /
                   static_cast<double>(rows.back().coverage);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_coverage_table(std::span<const CoverageRow> rows) {
  std::ostringstream out;
  out << "config,mode,coverage,growth\n";
  for (const CoverageRow &r : rows) {
    out << r.label << ',' << to_string(r.mode) << ',' << r.coverage << ',';
    if (r.growth) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%+.2f%%", *r.growth);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

} // namespace sopt
