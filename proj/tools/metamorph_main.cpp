#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <metamorph/base_conversion.hpp>
#include <metamorph/heapsort.hpp>
#include <metamorph/jigsaw.hpp>
#include <metamorph/metamorphism.hpp>
#include <metamorph/samplers.hpp>
#include <metamorph/streaming.hpp>
#include <metamorph/verify.hpp>

using json = nlohmann::json;
using namespace metamorph;

namespace {

//===========================================================================
// Rendering and parsing helpers.
//===========================================================================

std::string render_ext(const ExtVal& v, bool ascii) {
  if (v.is_infinite()) return ascii ? "inf" : "∞";
  return std::to_string(v.finite_value());
}

template <typename T, typename Render>
std::string join(const std::vector<T>& xs, const char* sep, Render render) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += render(xs[i]);
  }
  return out;
}

std::string join_digits(const std::vector<Digit>& ds) {
  return join(ds, ",", [](Digit d) { return std::to_string(d); });
}

json ext_to_json(const ExtVal& v) {
  if (v.is_infinite()) return json("inf");
  return json(v.finite_value());
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) out.push_back(token);
  if (!text.empty() && text.back() == ',') out.emplace_back();
  return out;
}

std::uint64_t parse_natural(const std::string& token) {
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(token, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + token + "'");
  }
  if (used != token.size() || token.empty() || token[0] == '-' || token[0] == '+')
    throw std::invalid_argument("not a number: '" + token + "'");
  return value;
}

std::vector<Digit> parse_digits(const std::string& csv) {
  std::vector<Digit> out;
  for (const std::string& token : split_csv(csv)) out.push_back(parse_natural(token));
  return out;
}

std::vector<ExtVal> parse_values(const std::string& csv) {
  std::vector<ExtVal> out;
  for (const std::string& token : split_csv(csv)) {
    if (token == "inf")
      out.push_back(ExtVal::infinity());
    else
      out.push_back(ExtVal::finite(parse_natural(token)));
  }
  return out;
}

//===========================================================================
// baseconv
//===========================================================================

struct BaseconvOpts {
  std::uint64_t from = 10;
  std::uint64_t to = 2;
  std::string digits_csv;
  std::string mode = "streaming";
  std::size_t max_output = 64;
  bool as_json = false;
  bool ascii = false;
};

int run_baseconv(const BaseconvOpts& opt) {
  auto input = parse_digits(opt.digits_csv);
  auto alg = digit_algebra(opt.from);
  BaseConvState start = initial_state(opt.from, opt.to);
  // Folding validates every digit before anything is printed.
  BaseConvState after = fold_left(alg, start, input);

  std::vector<Digit> output;
  std::vector<std::pair<Digit, std::vector<Digit>>> ledger;
  std::optional<std::vector<Digit>> flushed;

  if (opt.mode == "eager") {
    output = take(unfold(eager_emitter(opt.to), after), opt.max_output).items;
  } else {
    bool with_flush = opt.mode == "streaming-flush";
    StreamProcessor<Digit, Digit, BaseConvState> proc(
        conversion_spec(opt.from, opt.to, with_flush), start);
    for (Digit d : input) {
      ledger.emplace_back(d, proc.feed(d));
      for (Digit b : ledger.back().second) output.push_back(b);
    }
    if (output.size() > opt.max_output) output.resize(opt.max_output);
    auto tail = take(proc.finish(), opt.max_output - output.size());
    if (with_flush) flushed = tail.items;
    for (Digit b : tail.items) output.push_back(b);
  }

  // The emitted digits either carry the whole absorbed value or fall short.
  bool terminated = digits_value(output, opt.to) == after.value;
  const char* status = terminated ? "terminated" : "truncated";

  if (opt.as_json) {
    json doc{{"command", "baseconv"}, {"from", opt.from},
             {"to", opt.to},          {"input", input},
             {"mode", opt.mode},      {"max_output", opt.max_output},
             {"output", output},      {"status", status}};
    if (opt.mode != "eager") {
      json entries = json::array();
      for (const auto& [d, outs] : ledger)
        entries.push_back(json{{"in", d}, {"out", outs}});
      doc["ledger"] = entries;
    }
    if (flushed) doc["flush"] = *flushed;
    std::cout << doc.dump() << "\n";
    return 0;
  }

  const char* arrow = opt.ascii ? "->" : "→";
  for (const auto& [d, outs] : ledger)
    std::cout << "in:" << d << " " << arrow << " out:[" << join_digits(outs) << "]\n";
  if (flushed) std::cout << "flush:[" << join_digits(*flushed) << "]\n";
  std::cout << join_digits(output) << (output.empty() ? "" : " ") << "(" << status
            << ")\n";
  return 0;
}

//===========================================================================
// sort
//===========================================================================

struct SortOpts {
  std::string values_csv;
  std::string algorithm = "jigsaw-h";
  std::size_t prefix = 10;
  bool ascii = false;
};

int run_sort(const SortOpts& opt) {
  auto values = parse_values(opt.values_csv);
  auto piece = sorting_piece();
  ExtVal straight = ExtVal::infinity();

  Colist<ExtVal> out;
  if (opt.algorithm == "cbp")
    out = consume_before_produce_right(push_algebra(), pop_min_coalgebra(), values);
  else if (opt.algorithm == "jigsaw-h")
    out = jigsaw_horizontal(piece, straight, values);
  else if (opt.algorithm == "jigsaw-v")
    out = jigsaw_vertical(piece, straight, values);
  else
    out = jigsaw_general(piece, straight, sorting_flat_classifier(), values);

  auto got = take(out, opt.prefix);
  std::string line =
      join(got.items, ",", [&](const ExtVal& v) { return render_ext(v, opt.ascii); });
  if (got.ended) line += line.empty() ? "(ended)" : " (ended)";
  std::cout << line << "\n";
  return 0;
}

//===========================================================================
// verify
//===========================================================================

struct VerifyOpts {
  std::string instance;
  std::string condition;
  std::size_t max_len = 0;   // 0: per-condition default
  std::size_t prefix = 0;    // 0: per-instance default (equivalence)
  std::uint64_t seed = 0;
  std::uint64_t max_cases = 1000000;
  std::size_t max_produce = 4;
  std::uint64_t from = 10;
  std::uint64_t to = 2;
  std::string coalgebra = "guarded";
  bool as_json = false;
};

// Everything a report needs, condition-agnostic.  `witness` holds rendered
// label/value lines in print order; JSON mirrors them as an object.
struct Report {
  bool holds = true;
  std::uint64_t cases_checked = 0;
  bool truncated = false;
  std::vector<std::pair<std::string, std::string>> witness;
};

template <typename S, typename A>
void describe(Report& report, const ConditionWitness<S, A>& w) {
  report.witness.emplace_back("clause", w.clause);
  if (w.state) report.witness.emplace_back("state", w.state_key);
  if (w.element) report.witness.emplace_back("element", w.element_text);
  report.witness.emplace_back("expected", w.lhs);
  report.witness.emplace_back("actual", w.rhs);
}

template <typename S, typename A>
void describe(Report& report, const LemmaWitness<S, A>& w) {
  report.witness.emplace_back("state", w.state_key);
  report.witness.emplace_back("rest", w.rest_text);
  report.witness.emplace_back("expected", w.lhs);
  report.witness.emplace_back("actual", w.rhs);
}

template <typename A>
void describe(Report& report, const EquivalenceWitness<A>& w) {
  report.witness.emplace_back("input", w.input_text);
  report.witness.emplace_back("candidate", w.lhs);
  report.witness.emplace_back("definitional", w.rhs);
}

template <typename Cx>
void absorb(Report& report, const CheckResult<Cx>& result) {
  report.cases_checked += result.cases_checked;
  report.truncated = report.truncated || result.truncated;
  if (report.holds && result.counterexample) {
    report.holds = false;
    describe(report, *result.counterexample);
  }
}

Coalgebra<Digit, BaseConvState> chosen_emitter(const VerifyOpts& opt) {
  if (opt.coalgebra == "eager") return eager_emitter(opt.to);
  return guarded_emitter(opt.from, opt.to);
}

Report verify_baseconv(const VerifyOpts& opt) {
  Report report;
  auto alg = digit_algebra(opt.from);
  auto emitter = chosen_emitter(opt);
  auto states = reachable_states(opt.from, opt.to, emitter, opt.max_produce);

  if (opt.condition == "streaming") {
    std::size_t bound = opt.max_len ? opt.max_len : 4;
    absorb(report, check_streaming_condition(
                       alg, emitter, states, digit_domain(opt.from),
                       base_conv_state_eq(),
                       CheckBudget{bound, 0, 0, opt.max_cases}));
  } else if (opt.condition == "streaming-lemma") {
    std::size_t bound = opt.max_len ? opt.max_len : 2;
    absorb(report, check_streaming_lemma(
                       alg, emitter, states, digit_lists(opt.from),
                       base_conv_state_eq(),
                       CheckBudget{bound, 0, bound, opt.max_cases}));
  } else {  // equivalence
    std::size_t max_len = opt.max_len ? opt.max_len : 3;
    std::size_t prefix = opt.prefix ? opt.prefix : 8;
    BaseConvState start = initial_state(opt.from, opt.to);
    StreamingSpec<Digit, Digit, BaseConvState> spec{alg, emitter,
                                                    eager_emitter(opt.to)};
    std::function<Colist<Digit>(const std::vector<Digit>&)> candidate =
        [spec, start](const std::vector<Digit>& input) {
          return stream(spec, start, input);
        };
    std::function<Colist<Digit>(const std::vector<Digit>&)> definitional =
        [alg, start, &opt](const std::vector<Digit>& input) {
          return consume_before_produce(alg, eager_emitter(opt.to), start, input);
        };
    absorb(report, exhaustive_equivalence(candidate, definitional,
                                          digit_domain(opt.from).enumerate(0),
                                          max_len, prefix,
                                          CheckBudget{0, 0, 0, opt.max_cases}));
  }
  return report;
}

Report verify_heapsort(const VerifyOpts& opt) {
  Report report;
  auto finite = ext_val_domain(5, false).enumerate(0);
  auto heaps = heap_domain(finite);
  auto elems = ext_val_domain(5, true);
  auto piece = sorting_piece();
  ExtVal straight = ExtVal::infinity();

  if (opt.condition == "jigsaw-infinite") {
    std::size_t bound = opt.max_len ? opt.max_len : 4;
    absorb(report, check_jigsaw_infinite(push_algebra(), pop_min_total_coalgebra(),
                                         piece, straight, heaps, elems,
                                         heap_state_eq(),
                                         CheckBudget{bound, 0, 0, opt.max_cases}));
  } else if (opt.condition == "jigsaw-general") {
    std::size_t bound = opt.max_len ? opt.max_len : 4;
    absorb(report, check_jigsaw_general(push_algebra(), pop_min_coalgebra(), piece,
                                        straight, sorting_flat_classifier(), heaps,
                                        elems, heap_state_eq(),
                                        CheckBudget{bound, 0, 0, opt.max_cases}));
  } else {  // equivalence: every evaluator against fold-then-unfold
    std::size_t max_len = opt.max_len ? opt.max_len : 4;
    std::size_t prefix = opt.prefix ? opt.prefix : 6;
    std::function<Colist<ExtVal>(const std::vector<ExtVal>&)> padded =
        [&](const std::vector<ExtVal>& input) {
          return consume_before_produce_right(
              push_algebra(), as_coalgebra(pop_min_total_coalgebra()), input);
        };
    std::function<Colist<ExtVal>(const std::vector<ExtVal>&)> exact =
        [&](const std::vector<ExtVal>& input) {
          return consume_before_produce_right(push_algebra(), pop_min_coalgebra(),
                                              input);
        };
    std::vector<std::pair<std::string,
                          std::function<Colist<ExtVal>(const std::vector<ExtVal>&)>>>
        evaluators{
            {"jigsaw-h",
             [&](const std::vector<ExtVal>& input) {
               return jigsaw_horizontal(piece, straight, input);
             }},
            {"jigsaw-v",
             [&](const std::vector<ExtVal>& input) {
               return jigsaw_vertical(piece, straight, input);
             }},
            {"jigsaw-general",
             [&](const std::vector<ExtVal>& input) {
               return jigsaw_general(piece, straight, sorting_flat_classifier(),
                                     input);
             }},
        };
    for (const auto& [name, evaluator] : evaluators) {
      const auto& oracle = name == "jigsaw-general" ? exact : padded;
      auto result = exhaustive_equivalence(evaluator, oracle, finite, max_len,
                                           prefix, CheckBudget{0, 0, 0, opt.max_cases});
      if (report.holds && result.counterexample)
        report.witness.emplace_back("evaluator", name);
      absorb(report, result);
      if (!report.holds) break;
    }
  }
  return report;
}

int run_verify(const VerifyOpts& opt) {
  bool for_baseconv = opt.condition == "streaming" ||
                      opt.condition == "streaming-lemma";
  bool for_heapsort = opt.condition == "jigsaw-infinite" ||
                      opt.condition == "jigsaw-general";
  if ((for_baseconv && opt.instance != "baseconv") ||
      (for_heapsort && opt.instance != "heapsort"))
    throw std::invalid_argument("condition '" + opt.condition +
                                "' does not apply to instance '" + opt.instance +
                                "'");

  Report report =
      opt.instance == "baseconv" ? verify_baseconv(opt) : verify_heapsort(opt);

  if (opt.as_json) {
    json doc{{"command", "verify"},
             {"instance", opt.instance},
             {"condition", opt.condition},
             {"verdict", report.holds ? "holds" : "counterexample"},
             {"cases_checked", report.cases_checked},
             {"truncated", report.truncated},
             {"seed", opt.seed}};
    if (report.witness.empty()) {
      doc["witness"] = nullptr;
    } else {
      json w = json::object();
      for (const auto& [label, text] : report.witness) w[label] = text;
      doc["witness"] = w;
    }
    std::cout << doc.dump() << "\n";
  } else {
    std::cout << "verdict: " << (report.holds ? "holds" : "counterexample") << "\n";
    for (const auto& [label, text] : report.witness)
      std::cout << label << ": " << text << "\n";
    std::cout << "cases checked: " << report.cases_checked << "\n";
    if (report.truncated) std::cout << "truncated: yes\n";
  }
  return report.holds ? 0 : 1;
}

//===========================================================================
// trace-board
//===========================================================================

struct TraceBoardOpts {
  std::string values_csv;
  std::size_t rows = 0;
  std::string format = "text";
  bool ascii = false;
};

int run_trace_board(const TraceBoardOpts& opt) {
  auto values = parse_values(opt.values_csv);
  auto trace =
      board_trace(sorting_piece(), ExtVal::infinity(), values, opt.rows);

  if (opt.format == "json") {
    json rows = json::array();
    for (const auto& row : trace.rows) {
      json cells = json::array();
      for (const auto& piece : row)
        cells.push_back(json{{"top", ext_to_json(piece.top)},
                             {"right", ext_to_json(piece.right)},
                             {"left", ext_to_json(piece.left)},
                             {"bottom", ext_to_json(piece.bottom)}});
      rows.push_back(cells);
    }
    json top = json::array();
    for (const auto& v : trace.top_boundary) top.push_back(ext_to_json(v));
    json left = json::array();
    for (const auto& v : trace.left_boundary) left.push_back(ext_to_json(v));
    json doc{{"command", "trace-board"},
             {"top_boundary", top},
             {"rows", rows},
             {"left_boundary", left}};
    std::cout << doc.dump() << "\n";
    return 0;
  }

  // One line per row: the output at the left, the row's bottom boundary in
  // the middle, the straight edge at the right.  The header is the input.
  // Display width: the infinity glyph occupies one column, its ASCII
  // spelling three.
  auto width_of = [&](const ExtVal& v) {
    if (v.is_infinite()) return std::size_t(opt.ascii ? 3 : 1);
    return render_ext(v, opt.ascii).size();
  };
  std::size_t width = width_of(ExtVal::infinity());  // the right edge is always there
  for (const auto& v : trace.top_boundary) width = std::max(width, width_of(v));
  for (const auto& v : trace.left_boundary) width = std::max(width, width_of(v));
  for (const auto& row : trace.rows)
    for (const auto& piece : row) width = std::max(width, width_of(piece.bottom));

  auto pad = [&](const ExtVal& v) {
    std::string s = render_ext(v, opt.ascii);
    return std::string(width - width_of(v), ' ') + s;
  };
  auto rtrim = [](std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  };
  auto cells = [&](const std::vector<ExtVal>& vs) {
    return join(vs, " ", [&](const ExtVal& v) { return pad(v); });
  };

  std::cout << rtrim(std::string(width + 3, ' ') + cells(trace.top_boundary))
            << "\n";
  for (std::size_t r = 0; r < trace.rows.size(); ++r) {
    std::vector<ExtVal> bottoms;
    for (const auto& piece : trace.rows[r]) bottoms.push_back(piece.bottom);
    std::cout << rtrim(pad(trace.left_boundary[r]) + " | " + cells(bottoms) + " | " +
                       pad(ExtVal::infinity()))
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metamorphisms at the command line: fold a list, unfold the answer."};
  app.require_subcommand(1);

  BaseconvOpts bc;
  auto* baseconv = app.add_subcommand(
      "baseconv", "Convert a fraction between positional bases, digit by digit");
  baseconv->add_option("--from", bc.from, "Input base")->capture_default_str();
  baseconv->add_option("--to", bc.to, "Output base")->capture_default_str();
  baseconv->add_option("--digits", bc.digits_csv,
                       "Comma-separated input digits (fractional part)");
  baseconv->add_option("--mode", bc.mode, "Evaluation strategy")
      ->check(CLI::IsMember({"eager", "streaming", "streaming-flush"}))
      ->capture_default_str();
  baseconv->add_option("--max-output", bc.max_output, "Output digit budget")
      ->capture_default_str();
  baseconv->add_flag("--json", bc.as_json, "Emit JSON instead of text");
  baseconv->add_flag("--ascii", bc.ascii, "ASCII-only output");

  SortOpts so;
  auto* sort_cmd =
      app.add_subcommand("sort", "Sort naturals (and inf) by heap metamorphism");
  sort_cmd->add_option("--values", so.values_csv,
                       "Comma-separated naturals or 'inf'");
  sort_cmd->add_option("--algorithm", so.algorithm, "Evaluator")
      ->check(CLI::IsMember({"cbp", "jigsaw-h", "jigsaw-v", "jigsaw-general"}))
      ->capture_default_str();
  sort_cmd->add_option("--prefix", so.prefix, "How many outputs to print")
      ->capture_default_str();
  sort_cmd->add_flag("--ascii", so.ascii, "ASCII-only output");

  VerifyOpts vo;
  auto* verify = app.add_subcommand(
      "verify", "Check the streaming/jigsaw conditions or oracle equivalence");
  verify->add_option("--instance", vo.instance, "Algorithm instance")
      ->check(CLI::IsMember({"baseconv", "heapsort"}))
      ->required();
  verify->add_option("--condition", vo.condition, "What to check")
      ->check(CLI::IsMember({"streaming", "streaming-lemma", "jigsaw-infinite",
                             "jigsaw-general", "equivalence"}))
      ->required();
  verify->add_option("--max-len", vo.max_len,
                     "Search depth (0: per-condition default)");
  verify->add_option("--prefix", vo.prefix,
                     "Compared prefix length for equivalence (0: default)");
  verify->add_option("--seed", vo.seed, "Seed, echoed for reproducibility")
      ->capture_default_str();
  verify->add_option("--max-cases", vo.max_cases, "Case budget before truncation")
      ->capture_default_str();
  verify->add_option("--max-produce", vo.max_produce,
                     "Production closure depth for reachable states")
      ->capture_default_str();
  verify->add_option("--from", vo.from, "Input base (baseconv)")
      ->capture_default_str();
  verify->add_option("--to", vo.to, "Output base (baseconv)")->capture_default_str();
  verify->add_option("--coalgebra", vo.coalgebra, "Which emitter to check (baseconv)")
      ->check(CLI::IsMember({"guarded", "eager"}))
      ->capture_default_str();
  verify->add_flag("--json", vo.as_json, "Emit JSON instead of text");

  TraceBoardOpts tb;
  auto* trace = app.add_subcommand(
      "trace-board", "Render the filled sorting board for an input row");
  trace->add_option("--values", tb.values_csv, "Comma-separated naturals or 'inf'");
  trace->add_option("--rows", tb.rows, "How many rows to fill")->required();
  trace->add_option("--format", tb.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  trace->add_flag("--ascii", tb.ascii, "ASCII-only output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (baseconv->parsed()) return run_baseconv(bc);
    if (sort_cmd->parsed()) return run_sort(so);
    if (verify->parsed()) return run_verify(vo);
    return run_trace_board(tb);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
