#include "implang/harness/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "implang/core/files.hpp"
#include "implang/harness/orchestrate.hpp"

namespace implang::harness {

namespace fs = std::filesystem;
using analysis::BlockMatrix;
using analysis::StatResult;

namespace {

constexpr std::uint64_t kAnalysisSeed = 20'250'101;

std::string fmt3(double v) { return fmt::format("{:.3f}", v); }
std::string pct(double v) { return fmt::format("{:.1f}", 100.0 * v); }
std::string fmt_p(const std::optional<double>& p) { return p ? fmt::format("{:.4g}", *p) : ""; }

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<const RunRecord*> runs_where(const Aggregates& agg,
                                         const std::function<bool(const RunRecord&)>& keep) {
  std::vector<const RunRecord*> out;
  for (const auto& r : agg.runs)
    if (keep(r)) out.push_back(&r);
  return out;
}

std::vector<const RunRecord*> runs_of(const Aggregates& agg, const std::string& condition) {
  return runs_where(agg, [&](const RunRecord& r) { return r.condition == condition; });
}

std::vector<std::string> present_conditions(const Aggregates& agg) {
  std::vector<std::string> out;
  for (auto c : valid_conditions(agg.experiment))
    if (!runs_of(agg, std::string(c)).empty()) out.emplace_back(c);
  return out;
}

std::vector<const RunRecord*> ms_level(const Aggregates& agg, const std::string& level) {
  return runs_where(agg, [&](const RunRecord& r) { return r.metrics.at("frequency") == level; });
}

StatRow undefined_row(const std::string& cond, const std::string& name, const std::string& method,
                      const std::string& why) {
  StatResult r;
  r.name = name;
  r.method = method;
  return {cond, r, why};
}

void add_trend_and_bf(std::vector<StatRow>& rows, const std::string& cond, const BlockMatrix& m) {
  if (m.size() < 2) {
    rows.push_back(undefined_row(cond, "trend", "permutation_mean_spearman", "needs at least 2 runs"));
    return;
  }
  auto rng = Rng(kAnalysisSeed).split("trend:" + cond);
  rows.push_back({cond, analysis::permutation_trend_test(m, kPermutations, rng), ""});
  for (auto* fn : {&analysis::bf_bic_block_effect, &analysis::bf_bic_learning_direction}) {
    try {
      rows.push_back({cond, fn(m), ""});
    } catch (const std::domain_error& e) {
      rows.push_back(undefined_row(cond, fn == &analysis::bf_bic_block_effect ? "block_effect"
                                                                             : "learning_direction",
                                   "bic_bayes_factor", e.what()));
    }
  }
}

// per-run accuracy per morphosyntax test trial (24 items each)
BlockMatrix ms_trial_accuracy(const std::vector<const RunRecord*>& runs) {
  BlockMatrix m;
  for (const auto* r : runs) {
    std::vector<double> row;
    for (const auto& t : r->metrics.at("trials")) row.push_back(1.0 - t.at("total_errors").get<double>() / 24.0);
    m.push_back(row);
  }
  return m;
}

// mean over runs of errors table: rows type1..4, fp, fn, total; cols trial1..4, all
std::array<std::array<double, 5>, 7> ms_error_table(const std::vector<const RunRecord*>& runs) {
  std::array<std::array<double, 5>, 7> t{};
  if (runs.empty()) return t;
  for (const auto* r : runs) {
    int c = 0;
    for (const auto& tr : r->metrics.at("trials")) {
      const auto fp = tr.at("false_positives").get<std::vector<int>>();
      double row_vals[7] = {double(fp[0]), double(fp[1]), double(fp[2]), double(fp[3]),
                            double(fp[0] + fp[1] + fp[2] + fp[3]),
                            tr.at("false_negatives").get<double>(), tr.at("total_errors").get<double>()};
      for (int k = 0; k < 7; ++k) {
        t[k][c] += row_vals[k];
        t[k][4] += row_vals[k];
      }
      ++c;
    }
  }
  for (auto& row : t)
    for (auto& v : row) v /= static_cast<double>(runs.size());
  return t;
}

const std::array<std::string, 7> kErrorRows = {"errors_type1", "errors_type2", "errors_type3",
                                               "errors_type4", "false_positives",
                                               "false_negatives", "total_errors"};
const std::array<std::string, 7> kErrorRowLabels = {"1 order", "2 category", "3 single association",
                                                    "4 double association", "All false positives",
                                                    "False negatives", "Total errors"};

BlockMatrix syntax_matrix(const std::vector<const RunRecord*>& runs) {
  BlockMatrix m;
  for (const auto* r : runs) m.push_back(r->metrics.at("block_accuracy").get<std::vector<double>>());
  return m;
}

std::vector<double> column_means(const BlockMatrix& m) {
  if (m.empty()) return {};
  std::vector<double> out(m.front().size(), 0.0);
  for (const auto& r : m)
    for (std::size_t j = 0; j < out.size() && j < r.size(); ++j) out[j] += r[j];
  for (auto& v : out) v /= static_cast<double>(m.size());
  return out;
}

// --- SVG -----------------------------------------------------------------------

struct Series {
  std::string name;
  std::vector<double> values;
  std::string color;
  bool dashed = false;
};

constexpr int kW = 560, kH = 340, kL = 60, kR = 150, kT = 40, kB = 50;

std::string svg_open(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
      kW, kH, kW, kH, kW, kH, (kW - kR + kL) / 2, title);
}

std::string y_axis(double y_min, double y_max, const std::string& label) {
  std::string s;
  const int plot_h = kH - kT - kB;
  s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", kL, kT, kL, kH - kB);
  s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", kL, kH - kB,
                   kW - kR, kH - kB);
  for (int i = 0; i <= 4; ++i) {
    const double v = y_min + (y_max - y_min) * i / 4.0;
    const double y = kT + plot_h * (1.0 - i / 4.0);
    s += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.2f}</text>\n", kL - 6, y + 4, v);
    s += fmt::format("<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", kL + 1, y,
                     kW - kR, y);
  }
  s += fmt::format("<text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">{}</text>\n",
                   kT + plot_h / 2, kT + plot_h / 2, label);
  return s;
}

double y_of(double v, double y_min, double y_max) {
  const int plot_h = kH - kT - kB;
  return kT + plot_h * (1.0 - (v - y_min) / (y_max - y_min));
}

std::string line_chart(const std::string& title, const std::vector<std::string>& x_labels,
                       const std::string& y_label, double y_min, double y_max,
                       const std::vector<Series>& series) {
  std::string s = svg_open(title) + y_axis(y_min, y_max, y_label);
  const int plot_w = kW - kL - kR;
  const auto n = x_labels.size();
  auto x_of = [&](std::size_t i) { return kL + plot_w * (n > 1 ? (i + 0.5) / static_cast<double>(n) : 0.5); };
  for (std::size_t i = 0; i < n; ++i)
    s += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x_of(i), kH - kB + 18,
                     x_labels[i]);
  int legend_y = kT + 10;
  for (const auto& se : series) {
    std::string pts;
    for (std::size_t i = 0; i < se.values.size() && i < n; ++i)
      pts += fmt::format("{}{:.1f},{:.1f}", pts.empty() ? "" : " ", x_of(i), y_of(se.values[i], y_min, y_max));
    const std::string dash = se.dashed ? " stroke-dasharray=\"5,4\"" : "";
    s += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{}/>\n", pts,
                     se.color, dash);
    for (std::size_t i = 0; i < se.values.size() && i < n; ++i)
      s += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>\n", x_of(i),
                       y_of(se.values[i], y_min, y_max), se.color);
    s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"{}/>\n",
                     kW - kR + 10, legend_y, kW - kR + 30, legend_y, se.color, dash);
    s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kW - kR + 35, legend_y + 4, se.name);
    legend_y += 18;
  }
  return s + "</svg>\n";
}

struct DotGroup {
  std::string label;
  std::vector<double> values;
  std::vector<std::pair<std::string, double>> marks;  // reference lines: name, value
};

std::string dot_plot(const std::string& title, const std::string& y_label, const std::vector<DotGroup>& groups) {
  std::string s = svg_open(title) + y_axis(0, 1, y_label);
  const int plot_w = kW - kL - kR;
  const auto n = groups.size();
  static const std::array<std::string, 3> mark_colors = {"#d62728", "#7f7f7f", "#2ca02c"};
  for (std::size_t g = 0; g < n; ++g) {
    const double cx = kL + plot_w * (g + 0.5) / static_cast<double>(n);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", cx, kH - kB + 18,
                     groups[g].label);
    const auto& vals = groups[g].values;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      // deterministic horizontal spread
      const double dx = vals.size() > 1 ? (static_cast<double>(i) / (vals.size() - 1) - 0.5) * 40.0 : 0.0;
      s += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"#1f77b4\" fill-opacity=\"0.7\"/>\n",
                       cx + dx, y_of(vals[i], 0, 1));
    }
    for (std::size_t k = 0; k < groups[g].marks.size(); ++k) {
      const double y = y_of(groups[g].marks[k].second, 0, 1);
      s += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                       cx - 35, y, cx + 35, y, mark_colors[k % mark_colors.size()]);
    }
  }
  int legend_y = kT + 10;
  s += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#1f77b4\"/>\n", kW - kR + 20, legend_y);
  s += fmt::format("<text x=\"{}\" y=\"{}\">learner run</text>\n", kW - kR + 35, legend_y + 4);
  if (!groups.empty())
    for (std::size_t k = 0; k < groups.front().marks.size(); ++k) {
      legend_y += 18;
      s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                       kW - kR + 10, legend_y, kW - kR + 30, legend_y, mark_colors[k % mark_colors.size()]);
      s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kW - kR + 35, legend_y + 4,
                       groups.front().marks[k].first);
    }
  return s + "</svg>\n";
}

// --- markdown helpers -------------------------------------------------------

std::string md_row(const std::vector<std::string>& cells) {
  std::string s = "|";
  for (const auto& c : cells) s += " " + c + " |";
  return s + "\n";
}

std::string md_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string s = md_row(header);
  s += "|";
  for (std::size_t i = 0; i < header.size(); ++i) s += "---|";
  s += "\n";
  for (const auto& r : rows) s += md_row(r);
  return s + "\n";
}

std::string md_escape(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

std::string stats_section(const Analysis& an) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : an.stats)
    rows.push_back({r.condition, r.result.name, r.note.empty() ? fmt::format("{:.4f}", r.result.statistic) : "",
                    fmt_p(r.result.p_value),
                    r.result.bayes_factor ? fmt::format("{:.4g}", *r.result.bayes_factor) : "", r.result.method,
                    md_escape(r.note)});
  return "### Statistics\n\n" +
         md_table({"Condition", "Test", "Statistic", "p", "BF10", "Method", "Note"}, rows);
}

std::string comparison_section(const Analysis& an) {
  if (an.comparisons.empty()) return "";
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : an.comparisons)
    rows.push_back({c.condition, c.statistic, fmt3(c.learner_value), fmt3(c.human_value), fmt3(c.delta),
                    c.test ? fmt_p(c.test->p_value) : "", c.test ? c.test->method : "", c.source});
  return "### Learner vs human reference\n\n" +
         md_table({"Condition", "Statistic", "Learner", "Human", "Delta", "p", "Method", "Source"}, rows);
}

std::string ref_pct(Experiment e, const std::string& cond, const std::string& group) {
  try {
    return pct(analysis::find_reference(e, cond, "regularization_rate", group).value);
  } catch (const std::out_of_range&) {
    return "n/a";
  }
}

// --- per experiment ---------------------------------------------------------

void analyze_morphology(const Aggregates& agg, Analysis& an) {
  std::map<std::string, std::pair<int, int>> pooled;
  for (const auto& cond : present_conditions(agg)) {
    const auto runs = runs_of(agg, cond);
    int k = 0, n = 0;
    std::vector<double> rates, recognized, identified;
    for (const auto* r : runs) {
      k += r->metrics.at("regular").get<int>();
      n += r->metrics.at("parseable").get<int>();
      rates.push_back(r->metrics.at("regularization_rate").get<double>());
      recognized.push_back(r->metrics.at("recognized_pattern").get<double>());
      identified.push_back(r->metrics.at("identified_ka").get<double>());
    }
    pooled[cond] = {k, n};
    an.comparisons.push_back(analysis::compare_to_human(
        {{Experiment::morphology, cond, "regularization_rate", static_cast<double>(k) / n, k, n}})[0]);
    for (const auto& [name, xs] : {std::pair{std::string("recognized_pattern_vs_rate"), &recognized},
                                   std::pair{std::string("identified_ka_vs_rate"), &identified}}) {
      if (runs.size() < 3) {
        an.stats.push_back(undefined_row(cond, name, "t_test", "needs at least 3 runs"));
        continue;
      }
      try {
        auto r = analysis::pearson_correlation(*xs, rates);
        r.name = name;
        an.stats.push_back({cond, r, ""});
      } catch (const std::domain_error&) {
        an.stats.push_back(undefined_row(cond, name, "t_test", "undefined: zero variance"));
      }
    }
  }
  if (pooled.count("5R4E") && pooled.count("3R6E")) {
    auto r = analysis::two_proportion_test(pooled["5R4E"].first, pooled["5R4E"].second, pooled["3R6E"].first,
                                           pooled["3R6E"].second);
    r.name = "condition_difference";
    an.stats.push_back({"5R4E vs 3R6E", r, ""});
  }
}

void analyze_morphosyntax(const Aggregates& agg, Analysis& an) {
  for (const std::string level : {"high", "low"}) {
    const auto runs = ms_level(agg, level);
    if (runs.empty()) continue;
    const auto table = ms_error_table(runs);
    for (int row = 0; row < 7; ++row)
      for (int col = 0; col < 5; ++col) {
        const std::string stat = kErrorRows[row] + (col < 4 ? "_trial" + std::to_string(col + 1) : "_all");
        if (row != 6 && col != 4) continue;  // keep totals per trial and per-type sums
        an.comparisons.push_back(
            analysis::compare_to_human({{Experiment::morphosyntax, level, stat, table[row][col], {}, {}}})[0]);
      }
    add_trend_and_bf(an.stats, level, ms_trial_accuracy(runs));
  }
}

void analyze_syntax(const Aggregates& agg, Analysis& an) {
  std::map<std::string, std::pair<int, int>> pooled;
  for (const auto& cond : present_conditions(agg)) {
    const auto runs = runs_of(agg, cond);
    int k = 0, n = 0;
    for (const auto* r : runs) {
      k += r->metrics.at("correct").get<int>();
      n += r->metrics.at("judged").get<int>();
    }
    pooled[cond] = {k, n};
    add_trend_and_bf(an.stats, cond, syntax_matrix(runs));
  }
  if (pooled.count("grammarA") && pooled.count("grammarB") && pooled["grammarA"].second > 0 &&
      pooled["grammarB"].second > 0) {
    auto r = analysis::two_proportion_test(pooled["grammarA"].first, pooled["grammarA"].second,
                                           pooled["grammarB"].first, pooled["grammarB"].second);
    r.name = "grammar_difference";
    an.stats.push_back({"grammarA vs grammarB", r, ""});
  }
}

std::string report_morphology(const Aggregates& agg, const Analysis& an, ReportFiles& files) {
  const auto E = Experiment::morphology;
  std::string md = "## Morphology\n\n### Regularization rate (% of parseable answers using -ka)\n\n";
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> learner_row = {"Learner (" + agg.learner + ")"};
  std::vector<DotGroup> groups;
  for (const std::string cond : {"5R4E", "3R6E"}) {
    const auto runs = runs_of(agg, cond);
    int k = 0, n = 0;
    DotGroup g{cond, {}, {}};
    for (const auto* r : runs) {
      k += r->metrics.at("regular").get<int>();
      n += r->metrics.at("parseable").get<int>();
      g.values.push_back(r->metrics.at("regularization_rate").get<double>());
    }
    learner_row.push_back(n ? pct(static_cast<double>(k) / n) : "n/a");
    const auto lex = morphology::build_lexicon(cond);
    g.marks = {{"human adults", analysis::find_reference(E, cond, "regularization_rate").value},
               {"input -ka share", morphology::input_regular_token_fraction(lex)}};
    groups.push_back(std::move(g));
  }
  rows.push_back(learner_row);
  for (const auto& [group, label] : std::vector<std::pair<std::string, std::string>>{
           {analysis::kHumanGroup, "Human adults"},
           {"human children", "Human children"},
           {"gpt-4o", "gpt-4o (reported)"},
           {"o3-mini", "o3-mini (reported)"}})
    rows.push_back({label, ref_pct(E, "5R4E", group), ref_pct(E, "3R6E", group)});
  md += md_table({"Group", "5R4E", "3R6E"}, rows);
  md += fmt::format("Human adult reference (5R4E / 3R6E): {} / {}. Input token share of -ka: {} / {}.\n\n",
                    ref_pct(E, "5R4E", analysis::kHumanGroup), ref_pct(E, "3R6E", analysis::kHumanGroup),
                    pct(morphology::input_regular_token_fraction(morphology::build_lexicon("5R4E"))),
                    pct(morphology::input_regular_token_fraction(morphology::build_lexicon("3R6E"))));

  rows.clear();
  for (const auto& r : agg.runs)
    rows.push_back({r.run_id, r.condition, fmt3(r.metrics.at("regularization_rate").get<double>()),
                    std::to_string(r.metrics.at("parseable").get<int>()),
                    std::to_string(r.metrics.at("recognized_pattern").get<int>()),
                    std::to_string(r.metrics.at("identified_ka").get<int>()),
                    r.metrics.at("annotation").get<std::string>()});
  md += "### Runs\n\n" +
        md_table({"Run", "Condition", "Rate", "Parseable", "Recognized pattern", "Identified ka", "Annotation"}, rows);
  md += comparison_section(an) + stats_section(an);
  files.svgs.emplace_back("morphology_rates.svg",
                          dot_plot("Regularization rate per run", "rate of -ka", groups));
  md += "![Regularization rate per run](morphology_rates.svg)\n\n";
  return md;
}

std::string report_morphosyntax(const Aggregates& agg, const Analysis& an, ReportFiles& files) {
  std::string md = "## Morphosyntax\n\n";
  std::vector<Series> series;
  const std::map<std::string, std::string> colors = {{"high", "#1f77b4"}, {"low", "#ff7f0e"}};
  for (const std::string level : {"high", "low"}) {
    std::array<std::array<double, 5>, 7> human{};
    for (int row = 0; row < 7; ++row)
      for (int col = 0; col < 5; ++col)
        human[row][col] = analysis::find_reference(Experiment::morphosyntax, level,
                                                   kErrorRows[row] + (col < 4 ? "_trial" + std::to_string(col + 1) : "_all"))
                              .value;
    series.push_back({"human " + level, {human[6][0], human[6][1], human[6][2], human[6][3]}, colors.at(level), true});
    const auto runs = ms_level(agg, level);
    if (runs.empty()) continue;
    const auto t = ms_error_table(runs);
    series.push_back({"learner " + level, {t[6][0], t[6][1], t[6][2], t[6][3]}, colors.at(level), false});
    std::vector<std::vector<std::string>> rows;
    for (int row = 0; row < 7; ++row) {
      std::vector<std::string> cells = {kErrorRowLabels[row]};
      for (int col = 0; col < 5; ++col) cells.push_back(fmt::format("{:.1f} ({:.1f})", t[row][col], human[row][col]));
      rows.push_back(cells);
    }
    md += fmt::format("### Mean errors, {} frequency ({} runs; human reference in parentheses)\n\n", level, runs.size());
    md += md_table({"Error type", "Trial 1", "Trial 2", "Trial 3", "Trial 4", "All"}, rows);
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : agg.runs) {
    int fixes = 0;
    for (const auto& p : r.metrics.at("probes")) fixes += p.at("fixes").get<int>();
    rows.push_back({r.run_id, fmt3(r.metrics.at("precision").get<double>()), fmt3(r.metrics.at("recall").get<double>()),
                    fmt3(r.metrics.at("novel_recall").get<double>()),
                    std::to_string(r.metrics.at("unparseable").get<int>()), std::to_string(fixes) + "/4"});
  }
  md += "### Runs\n\n" +
        md_table({"Run", "Precision", "Recall", "Novel recall", "Unparseable", "Corrections fixed"}, rows);
  md += comparison_section(an) + stats_section(an);
  md += "Trend tests use per-trial accuracy (1 - total errors / 24).\n\n";
  files.svgs.emplace_back("morphosyntax_errors.svg",
                          line_chart("Mean total errors per test trial", {"1", "2", "3", "4"}, "errors", 0, 24, series));
  md += "![Mean total errors per test trial](morphosyntax_errors.svg)\n\n";
  return md;
}

std::string report_syntax(const Aggregates& agg, const Analysis& an, ReportFiles& files) {
  std::string md = "## Finite-state syntax\n\n";
  std::vector<Series> series;
  std::size_t n_blocks = 0;
  const std::map<std::string, std::string> colors = {{"grammarA", "#2ca02c"}, {"grammarB", "#9467bd"}};
  for (const auto& cond : present_conditions(agg)) {
    const auto runs = runs_of(agg, cond);
    const auto means = column_means(syntax_matrix(runs));
    n_blocks = std::max(n_blocks, means.size());
    series.push_back({cond, means, colors.at(cond), false});
    std::vector<std::string> header = {"Grammar"}, cells = {cond};
    for (std::size_t b = 0; b < means.size(); ++b) {
      header.push_back("Block " + std::to_string(b + 1));
      cells.push_back(fmt3(means[b]));
    }
    std::vector<double> q;
    for (const auto* r : runs) q.push_back(r->metrics.at("questionnaire_mean").get<double>());
    header.push_back("Questionnaire");
    cells.push_back(fmt3(mean_of(q)));
    md += fmt::format("### Mean accuracy per block, {} ({} runs)\n\n", cond, runs.size()) + md_table(header, {cells});
  }
  md += fmt::format("Human reference: {}; block effect BF > {}.\n\n",
                    analysis::find_reference(Experiment::syntax, "grammarA", "learning_bf_lower_bound").source,
                    analysis::find_reference(Experiment::syntax, "grammarA", "learning_bf_lower_bound").value);
  md += stats_section(an);
  md += "Bayes factors use the BIC approximation: intercept-only against block as a categorical factor. "
        "The learning-direction factor restricts the block means to be non-decreasing.\n\n";
  std::vector<std::string> labels;
  for (std::size_t b = 0; b < n_blocks; ++b) labels.push_back(std::to_string(b + 1));
  series.push_back({"chance", std::vector<double>(n_blocks, 0.5), "#7f7f7f", true});
  files.svgs.emplace_back("syntax_accuracy.svg",
                          line_chart("Mean accuracy per block", labels, "accuracy", 0, 1, series));
  md += "![Mean accuracy per block](syntax_accuracy.svg)\n\n";
  return md;
}

std::string runs_csv(const Aggregates& agg) {
  std::vector<CsvRow> rows;
  switch (agg.experiment) {
    case Experiment::morphology:
      rows.push_back({"run_id", "condition", "regularization_rate", "regular", "parseable", "unparseable",
                      "recognized_pattern", "identified_ka"});
      for (const auto& r : agg.runs)
        rows.push_back({r.run_id, r.condition, fmt::format("{:.6f}", r.metrics.at("regularization_rate").get<double>()),
                        std::to_string(r.metrics.at("regular").get<int>()),
                        std::to_string(r.metrics.at("parseable").get<int>()),
                        std::to_string(r.metrics.at("unparseable").get<int>()),
                        std::to_string(r.metrics.at("recognized_pattern").get<int>()),
                        std::to_string(r.metrics.at("identified_ka").get<int>())});
      break;
    case Experiment::morphosyntax: {
      CsvRow header = {"run_id", "condition"};
      for (int t = 1; t <= 4; ++t) header.push_back("total_errors_trial" + std::to_string(t));
      for (const char* k : {"precision", "recall", "novel_recall", "unparseable"}) header.push_back(k);
      rows.push_back(header);
      for (const auto& r : agg.runs) {
        CsvRow row = {r.run_id, r.condition};
        for (const auto& t : r.metrics.at("trials")) row.push_back(std::to_string(t.at("total_errors").get<int>()));
        for (const char* k : {"precision", "recall", "novel_recall"})
          row.push_back(fmt::format("{:.6f}", r.metrics.at(k).get<double>()));
        row.push_back(std::to_string(r.metrics.at("unparseable").get<int>()));
        rows.push_back(row);
      }
      break;
    }
    case Experiment::syntax: {
      rows.push_back({"run_id", "condition", "block", "accuracy", "judged", "unparseable"});
      for (const auto& r : agg.runs) {
        const auto acc = r.metrics.at("block_accuracy").get<std::vector<double>>();
        for (std::size_t b = 0; b < acc.size(); ++b)
          rows.push_back({r.run_id, r.condition, std::to_string(b + 1), fmt::format("{:.6f}", acc[b]),
                          std::to_string(r.metrics.at("block_judged")[b].get<int>()),
                          std::to_string(r.metrics.at("block_unparseable")[b].get<int>())});
      }
      break;
    }
  }
  return to_csv(rows);
}

std::string comparison_csv(const Analysis& an) {
  std::vector<CsvRow> rows = {{"experiment", "condition", "statistic", "learner", "human", "delta", "p_value",
                               "method", "source"}};
  for (const auto& c : an.comparisons)
    rows.push_back({std::string(to_string(c.experiment)), c.condition, c.statistic,
                    fmt::format("{:.6f}", c.learner_value), fmt::format("{:.6f}", c.human_value),
                    fmt::format("{:.6f}", c.delta), c.test ? fmt_p(c.test->p_value) : "",
                    c.test ? c.test->method : "", c.source});
  return to_csv(rows);
}

}  // namespace

Aggregates load_aggregates(Experiment e, const fs::path& out_dir) {
  Aggregates agg{e, "", {}, {}};
  const fs::path root = out_dir / std::string(to_string(e)) / "runs";
  std::vector<fs::path> dirs;
  if (fs::exists(root))
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.is_directory() && fs::exists(entry.path() / kManifestFile)) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  std::set<std::string> learners;
  for (const auto& d : dirs) {
    const auto m = read_manifest(d);
    if (!manifest_complete(m, d)) {
      agg.failed.push_back(m.run_id);
      continue;
    }
    learners.insert(m.learner);
    agg.runs.push_back({m.run_id, m.condition, Json::parse(read_file(d / m.metrics))});
  }
  // canonical condition order, then run id
  const auto conds = valid_conditions(e);
  auto rank = [&](const std::string& c) { return std::find(conds.begin(), conds.end(), c) - conds.begin(); };
  std::stable_sort(agg.runs.begin(), agg.runs.end(), [&](const RunRecord& a, const RunRecord& b) {
    return std::pair(rank(a.condition), a.run_id) < std::pair(rank(b.condition), b.run_id);
  });
  agg.learner = learners.size() == 1 ? *learners.begin() : learners.empty() ? "none" : "mixed";
  return agg;
}

Analysis analyze(const Aggregates& agg) {
  Analysis an;
  switch (agg.experiment) {
    case Experiment::morphology: analyze_morphology(agg, an); break;
    case Experiment::morphosyntax: analyze_morphosyntax(agg, an); break;
    case Experiment::syntax: analyze_syntax(agg, an); break;
  }
  return an;
}

std::string stats_csv(Experiment e, const Analysis& an) {
  std::vector<CsvRow> rows = {{"experiment", "condition", "name", "statistic", "p_value", "bayes_factor", "method",
                               "n", "note"}};
  for (const auto& s : an.stats) {
    std::string n;
    for (int v : s.result.n) n += (n.empty() ? "" : ";") + std::to_string(v);
    rows.push_back({std::string(to_string(e)), s.condition, s.result.name,
                    s.note.empty() ? fmt::format("{:.6g}", s.result.statistic) : "",
                    s.result.p_value ? fmt::format("{:.6g}", *s.result.p_value) : "",
                    s.result.bayes_factor ? fmt::format("{:.6g}", *s.result.bayes_factor) : "", s.result.method, n,
                    s.note});
  }
  return to_csv(rows);
}

ReportFiles render_report(const Aggregates& agg, const Analysis& an) {
  if (agg.runs.empty()) throw std::runtime_error("no completed runs to report for " + std::string(to_string(agg.experiment)));
  ReportFiles files;
  std::string md = fmt::format("# {} report\n\nLearner: {}. Completed runs: {}. Failed runs: {}.\n\n",
                               to_string(agg.experiment), agg.learner, agg.runs.size(), agg.failed.size());
  if (!agg.failed.empty()) {
    md += "Failed or incomplete:";
    for (const auto& f : agg.failed) md += " " + f;
    md += "\n\n";
  }
  switch (agg.experiment) {
    case Experiment::morphology: md += report_morphology(agg, an, files); break;
    case Experiment::morphosyntax: md += report_morphosyntax(agg, an, files); break;
    case Experiment::syntax: md += report_syntax(agg, an, files); break;
  }
  files.markdown = md;
  files.stats_csv = stats_csv(agg.experiment, an);
  files.runs_csv = runs_csv(agg);
  files.comparison_csv = comparison_csv(an);
  return files;
}

ReportFiles emit_report(const Aggregates& agg, const fs::path& dir) {
  auto files = render_report(agg, analyze(agg));
  atomic_write(dir / "report.md", files.markdown);
  atomic_write(dir / "stats.csv", files.stats_csv);
  atomic_write(dir / "runs.csv", files.runs_csv);
  atomic_write(dir / "comparison.csv", files.comparison_csv);
  for (const auto& [name, svg] : files.svgs) atomic_write(dir / name, svg);
  return files;
}

}  // namespace implang::harness
