// Command-line front end: orchestrates ingest -> signs -> estimators ->
// reports over a directory dataset, with a JSON run manifest per command.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mresp/decompose.hpp"
#include "mresp/io.hpp"
#include "mresp/market_data.hpp"
#include "mresp/midpoint.hpp"
#include "mresp/response.hpp"
#include "mresp/spread.hpp"
#include "mresp/synth.hpp"
#include "mresp/text.hpp"
#include "mresp/time_shift.hpp"
#include "mresp/trade_signs.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mresp;

namespace {

// ---------------------------------------------------------------- helpers

MarketWindow parse_window_spec(const std::string& spec) {
    const auto dash = spec.find('-');
    if (dash == std::string::npos)
        throw std::runtime_error("window must be HH:MM:SS-HH:MM:SS");
    const auto open = parse_time_of_day(spec.substr(0, dash));
    const auto close = parse_time_of_day(spec.substr(dash + 1));
    if (!open || !close || *close <= *open)
        throw std::runtime_error("bad window '" + spec + "'");
    return MarketWindow{*open, *close};
}

std::string window_spec(const MarketWindow& w) {
    return format_time_of_day(w.open_s) + "-" + format_time_of_day(w.close_s);
}

// "a:b[:s]" inclusive range or comma list; shifts may be negative.
std::vector<std::int32_t> parse_grid(const std::string& spec) {
    std::vector<std::int32_t> out;
    std::vector<std::string_view> parts;
    if (spec.find(':') != std::string::npos) {
        split_fields(spec, ':', parts);
        if (parts.size() < 2 || parts.size() > 3)
            throw std::runtime_error("grid must be start:stop[:step]");
        const auto start = parse_int64(parts[0]);
        const auto stop = parse_int64(parts[1]);
        const auto step = parts.size() == 3 ? parse_int64(parts[2])
                                            : std::optional<std::int64_t>(1);
        if (!start || !stop || !step || *step < 1 || *stop < *start)
            throw std::runtime_error("bad grid '" + spec + "'");
        for (std::int64_t v = *start; v <= *stop; v += *step)
            out.push_back(static_cast<std::int32_t>(v));
        return out;
    }
    split_fields(spec, ',', parts);
    for (const auto& part : parts) {
        const auto v = parse_int64(part);
        if (!v) throw std::runtime_error("bad grid value '" + std::string(part) + "'");
        out.push_back(static_cast<std::int32_t>(*v));
    }
    if (out.empty()) throw std::runtime_error("empty grid");
    return out;
}

struct CommonOpts {
    std::string out = "out";
    std::string data;
    std::string window;
    int workers = 0;  // 0: machine parallelism
    bool carry_signs = false;

    int effective_workers() const {
        if (workers > 0) return workers;
        const auto hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
};

void add_out_opt(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "output directory")->capture_default_str();
    cmd->add_option("--workers", o.workers,
                    "worker threads (0 = machine parallelism)")
        ->capture_default_str();
}

void add_data_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--data", o.data, "dataset directory")->required();
    cmd->add_option("--window", o.window,
                    "market window (default: dataset manifest, else "
                    "09:40:00-15:50:00)");
    cmd->add_flag("--carry-signs", o.carry_signs,
                  "carry the tick-rule state across days");
}

// Window precedence: explicit flag > dataset.json > library default.
MarketWindow effective_window(const CommonOpts& o) {
    if (!o.window.empty()) return parse_window_spec(o.window);
    if (!o.data.empty()) {
        const fs::path manifest = fs::path(o.data) / "dataset.json";
        if (fs::exists(manifest)) {
            const auto j = json::parse(read_file(manifest));
            if (j.contains("window"))
                return MarketWindow{j["window"]["open_s"].get<std::int32_t>(),
                                    j["window"]["close_s"].get<std::int32_t>()};
        }
    }
    return MarketWindow{};
}

StockSeries load_series(const CommonOpts& o, const std::string& symbol,
                        const MarketWindow& window) {
    const auto events = load_stock_events(o.data, symbol);
    return build_stock_series(events, window, o.carry_signs);
}

void emit_manifest(const CommonOpts& o, json manifest) {
    manifest["workers"] = o.effective_workers();
    const std::string text = manifest.dump(2) + "\n";
    atomic_write_file(fs::path(o.out) / "manifest.json", text);
    std::cout << text;
}

void write_dataset_manifest(const fs::path& root, const MarketWindow& window) {
    json j;
    j["window"] = {{"open_s", window.open_s}, {"close_s", window.close_s}};
    j["symbols"] = json::object();
    for (const auto& symbol : list_symbols(root)) {
        json days = json::array();
        for (const auto& day : list_days(root, symbol, ".quotes.csv"))
            days.push_back(day.iso());
        j["symbols"][symbol] = std::move(days);
    }
    atomic_write_file(root / "dataset.json", j.dump(2) + "\n");
}

void write_curve_files(const fs::path& dir, const std::string& stem,
                       const ResponseCurve& curve, json& outputs) {
    atomic_write_file(dir / (stem + ".csv"), curve_to_csv(curve));
    atomic_write_file(dir / (stem + ".json"), curve_to_json(curve));
    outputs.push_back((dir / (stem + ".csv")).string());
    outputs.push_back((dir / (stem + ".json")).string());
}

struct EstimatorOpts {
    std::int32_t tau_max = 1000;
    std::string lags;
    std::string return_kind = "relative";
    bool include_zero = false;

    EstimatorConfig config(const CommonOpts& common) const {
        EstimatorConfig cfg;
        cfg.tau_max = tau_max;
        if (!lags.empty()) cfg.lags = parse_grid(lags);
        cfg.exclude_zero_sign = !include_zero;
        if (return_kind == "relative") {
            cfg.return_kind = ReturnKind::relative;
        } else if (return_kind == "logarithmic" || return_kind == "log") {
            cfg.return_kind = ReturnKind::logarithmic;
        } else {
            throw std::runtime_error("return kind must be relative|logarithmic");
        }
        cfg.workers = common.effective_workers();
        return cfg;
    }

    json describe() const {
        return {{"tau_max", tau_max},
                {"lags", lags.empty() ? "1.." + std::to_string(tau_max) : lags},
                {"return_kind", return_kind},
                {"exclude_zero_sign", !include_zero}};
    }
};

void add_estimator_opts(CLI::App* cmd, EstimatorOpts& e,
                        const std::string& default_kind = "relative") {
    e.return_kind = default_kind;
    cmd->add_option("--tau-max", e.tau_max, "largest lag")->capture_default_str();
    cmd->add_option("--lags", e.lags,
                    "lag grid, comma list or start:stop:step (default all "
                    "1..tau-max)");
    cmd->add_option("--return-kind", e.return_kind, "relative|logarithmic")
        ->capture_default_str();
    cmd->add_flag("--include-zero-signs", e.include_zero,
                  "keep seconds with zero net sign in the denominator");
}

json report_json(const ParseReport& report) {
    json rejects = json::array();
    for (const auto& r : report.detail)
        rejects.push_back({{"line", r.line}, {"reason", r.reason}});
    return {{"accepted", report.accepted},
            {"rejected", report.rejected},
            {"first_rejects", std::move(rejects)}};
}

// ------------------------------------------------------------ subcommands

struct IngestArgs {
    CommonOpts common;
    std::string quotes_path;
    std::string trades_path;
    std::string symbol;
    std::string delimiter = ",";
    std::string window = "09:40:00-15:50:00";
};

int run_ingest(const IngestArgs& args) {
    const MarketWindow window = parse_window_spec(args.window);
    FormatConfig format;
    if (args.delimiter.size() != 1)
        throw std::runtime_error("delimiter must be one character");
    format.delimiter = args.delimiter[0];

    ParseReport quotes_report, trades_report;
    std::vector<QuoteEvent> quotes;
    {
        std::ifstream in(args.quotes_path);
        if (!in) throw std::runtime_error("cannot open " + args.quotes_path);
        quotes = filter_market_time(parse_quotes(in, format, quotes_report), window);
    }
    std::vector<TradeEvent> trades;
    if (!args.trades_path.empty()) {
        std::ifstream in(args.trades_path);
        if (!in) throw std::runtime_error("cannot open " + args.trades_path);
        trades = filter_market_time(parse_trades(in, format, trades_report), window);
    }

    const fs::path root(args.common.out);
    json outputs = json::array();
    std::size_t quote_days = 0, trade_days = 0;
    for (const auto day_events : split_by_day<QuoteEvent>(quotes)) {
        std::ostringstream body;
        write_quotes(body, day_events);
        const auto path =
            day_file(root, args.symbol, day_events.front().day, ".quotes.csv");
        atomic_write_file(path, std::move(body).str());
        outputs.push_back(path.string());
        // Columnar midpoint export alongside the validated events.
        const auto series = build_midpoint_series(day_events, window);
        const auto mid_path =
            day_file(root, args.symbol, day_events.front().day, ".mid.csv");
        atomic_write_file(mid_path, midpoint_to_csv(series));
        outputs.push_back(mid_path.string());
        ++quote_days;
    }
    for (const auto day_events : split_by_day<TradeEvent>(trades)) {
        std::ostringstream body;
        write_trades(body, day_events);
        const auto path =
            day_file(root, args.symbol, day_events.front().day, ".trades.csv");
        atomic_write_file(path, std::move(body).str());
        outputs.push_back(path.string());
        ++trade_days;
    }
    write_dataset_manifest(root, window);

    emit_manifest(args.common,
                  {{"command", "ingest"},
                   {"symbol", args.symbol},
                   {"window", window_spec(window)},
                   {"inputs",
                    {{"quotes", args.quotes_path}, {"trades", args.trades_path}}},
                   {"quotes", report_json(quotes_report)},
                   {"trades", report_json(trades_report)},
                   {"quote_days", quote_days},
                   {"trade_days", trade_days},
                   {"outputs", outputs}});
    return 0;
}

struct SynthArgs {
    CommonOpts common;
    SynthParams params;
    std::string symbol = "SYN";
    std::string trades_spec = "fixed:1";
    std::string kernel_spec = "permanent";
    std::string start_day = "2008-01-02";
    std::string window = "09:40:00-15:50:00";
    bool full_window = false;
};

int run_synth(SynthArgs args) {
    args.params.window = parse_window_spec(args.window);
    if (args.full_window || args.params.seconds_per_day == 0)
        args.params.seconds_per_day = args.params.window.length();

    if (args.trades_spec.rfind("fixed:", 0) == 0) {
        args.params.trades_law.kind = SynthParams::TradesLaw::Kind::fixed;
        args.params.trades_law.value = std::stod(args.trades_spec.substr(6));
    } else if (args.trades_spec.rfind("geometric:", 0) == 0) {
        args.params.trades_law.kind = SynthParams::TradesLaw::Kind::geometric;
        args.params.trades_law.value = std::stod(args.trades_spec.substr(10));
    } else {
        throw std::runtime_error("trades law must be fixed:<k> or geometric:<mean>");
    }
    if (args.kernel_spec == "permanent") {
        args.params.kernel.kind = SynthParams::ImpactKernel::Kind::permanent;
    } else if (args.kernel_spec.rfind("transient:", 0) == 0) {
        args.params.kernel.kind = SynthParams::ImpactKernel::Kind::transient;
        args.params.kernel.decay = std::stod(args.kernel_spec.substr(10));
    } else {
        throw std::runtime_error("kernel must be permanent or transient:<decay>");
    }
    if (const auto day = Date::parse(args.start_day)) {
        args.params.start_day = *day;
    } else {
        throw std::runtime_error("bad start day '" + args.start_day + "'");
    }

    const auto data = generate(args.params, args.common.effective_workers());

    // The generated stream occupies [open_s, open_s + seconds_per_day); the
    // dataset manifest records that as the effective window so downstream
    // commands size their series to match.
    const MarketWindow effective{
        args.params.window.open_s,
        args.params.window.open_s + args.params.seconds_per_day};

    const fs::path root(args.common.out);
    json outputs = json::array();
    std::size_t n_quotes = 0, n_trades = 0;
    for (const auto& day : data.days) {
        n_quotes += day.quotes.size();
        n_trades += day.trades.size();
        {
            std::ostringstream body;
            write_quotes(body, day.quotes);
            const auto path = day_file(root, args.symbol, day.day, ".quotes.csv");
            atomic_write_file(path, std::move(body).str());
            outputs.push_back(path.string());
        }
        {
            std::ostringstream body;
            write_trades(body, day.trades);
            const auto path = day_file(root, args.symbol, day.day, ".trades.csv");
            atomic_write_file(path, std::move(body).str());
            outputs.push_back(path.string());
        }
        {
            // Ground-truth signs, for audits and classifier validation.
            const auto path =
                day_file(root, args.symbol, day.day, ".true_signs.csv");
            atomic_write_file(path, trade_signs_to_csv(day.truth));
            outputs.push_back(path.string());
        }
    }
    write_dataset_manifest(root, effective);

    emit_manifest(
        args.common,
        {{"command", "synth"},
         {"symbol", args.symbol},
         {"seed", args.params.seed},
         {"params",
          {{"days", args.params.days},
           {"seconds_per_day", args.params.seconds_per_day},
           {"p_persist", args.params.p_persist},
           {"impact", args.params.impact},
           {"noise_sigma", args.params.noise_sigma},
           {"trades_law", args.trades_spec},
           {"kernel", args.kernel_spec},
           {"tick", args.params.tick},
           {"base_spread", args.params.base_spread},
           {"base_price", args.params.base_price},
           {"start_day", args.params.start_day.iso()}}},
         {"window", window_spec(effective)},
         {"quotes", n_quotes},
         {"trades", n_trades},
         {"outputs", outputs}});
    return 0;
}

struct SignsArgs {
    CommonOpts common;
    std::string symbol;
};

int run_signs(const SignsArgs& args) {
    const auto window = effective_window(args.common);
    const auto series = load_series(args.common, args.symbol, window);

    const fs::path root(args.common.out);
    json outputs = json::array();
    for (const auto& day : series.signs) {
        const auto signs_path = day_file(root, args.symbol, day.day, ".signs.csv");
        atomic_write_file(signs_path, signs_to_csv(day));
        outputs.push_back(signs_path.string());
        const auto trades_path =
            day_file(root, args.symbol, day.day, ".trade_signs.csv");
        atomic_write_file(trades_path, trade_signs_to_csv(day));
        outputs.push_back(trades_path.string());
    }

    emit_manifest(args.common, {{"command", "signs"},
                                {"symbol", args.symbol},
                                {"window", window_spec(window)},
                                {"days", series.signs.size()},
                                {"unresolved_trades", series.unresolved_trades},
                                {"carry_signs", args.common.carry_signs},
                                {"outputs", outputs}});
    return 0;
}

struct ResponseArgs {
    CommonOpts common;
    EstimatorOpts est;
    std::string symbol_i;
    std::string symbol_j;
    std::string scale = "physical";
};

int run_response(const ResponseArgs& args) {
    const auto window = effective_window(args.common);
    const std::string j_symbol =
        args.symbol_j.empty() ? args.symbol_i : args.symbol_j;
    const auto cfg = args.est.config(args.common);

    const auto series_i = load_series(args.common, args.symbol_i, window);
    const auto series_j = args.symbol_i == j_symbol
                              ? StockSeries{}
                              : load_series(args.common, j_symbol, window);
    const auto& signs = args.symbol_i == j_symbol ? series_i.signs : series_j.signs;

    ResponseCurve curve;
    if (args.scale == "trade") {
        curve = response_trade_scale(series_i.mids, signs, cfg);
    } else if (args.scale == "physical") {
        curve = response_physical(series_i.mids, signs, cfg);
    } else if (args.scale == "activity") {
        curve = response_activity(series_i.mids, signs, cfg);
    } else {
        throw std::runtime_error("scale must be trade|physical|activity");
    }
    curve.meta.symbol_i = args.symbol_i;
    curve.meta.symbol_j = j_symbol;

    const fs::path root(args.common.out);
    json outputs = json::array();
    const std::string stem =
        "response_" + args.scale + "_" + args.symbol_i + "_" + j_symbol;
    write_curve_files(root, stem, curve, outputs);

    emit_manifest(args.common, {{"command", "response"},
                                {"i", args.symbol_i},
                                {"j", j_symbol},
                                {"scale", args.scale},
                                {"window", window_spec(window)},
                                {"estimator", args.est.describe()},
                                {"days", curve.meta.n_days},
                                {"carry_signs", args.common.carry_signs},
                                {"outputs", outputs}});
    return 0;
}

struct ShiftScanArgs {
    CommonOpts common;
    EstimatorOpts est;
    std::string symbol_i;
    std::string symbol_j;
    std::string mode = "fixed-tau";
    std::int32_t value = 1;
    std::string grid;
    std::string scale = "physical";
};

int run_shift_scan(const ShiftScanArgs& args) {
    const auto window = effective_window(args.common);
    const std::string j_symbol =
        args.symbol_j.empty() ? args.symbol_i : args.symbol_j;

    ShiftScanConfig scan_cfg;
    if (args.mode == "fixed-tau") {
        scan_cfg.mode = ShiftScanConfig::Mode::fixed_tau_vary_shift;
    } else if (args.mode == "fixed-shift") {
        scan_cfg.mode = ShiftScanConfig::Mode::fixed_shift_vary_tau;
    } else {
        throw std::runtime_error("mode must be fixed-tau|fixed-shift");
    }
    scan_cfg.fixed_value = args.value;
    scan_cfg.grid = parse_grid(args.grid);
    if (args.scale == "physical") {
        scan_cfg.scale = ShiftScale::physical;
    } else if (args.scale == "trade") {
        scan_cfg.scale = ShiftScale::trade;
    } else {
        throw std::runtime_error("scale must be physical|trade");
    }
    scan_cfg.est = args.est.config(args.common);

    const auto series_i = load_series(args.common, args.symbol_i, window);
    const auto series_j = args.symbol_i == j_symbol
                              ? StockSeries{}
                              : load_series(args.common, j_symbol, window);
    const auto& signs = args.symbol_i == j_symbol ? series_i.signs : series_j.signs;

    auto scan = mresp::run_shift_scan(series_i.mids, signs, scan_cfg);

    const fs::path root(args.common.out);
    json outputs = json::array();
    json points = json::array();
    for (std::size_t g = 0; g < scan.curves.size(); ++g) {
        auto& curve = scan.curves[g];
        curve.meta.symbol_i = args.symbol_i;
        curve.meta.symbol_j = j_symbol;
        const bool vary_shift =
            scan_cfg.mode == ShiftScanConfig::Mode::fixed_tau_vary_shift;
        const std::string stem =
            std::string("scan_") + (vary_shift ? "ts_" : "tau_") +
            std::to_string(scan_cfg.grid[g]) + "_" + args.symbol_i + "_" +
            j_symbol;
        write_curve_files(root, stem, curve, outputs);
        points.push_back({{vary_shift ? "t_s" : "tau", scan_cfg.grid[g]},
                          {"file", stem + ".csv"}});
    }

    emit_manifest(args.common, {{"command", "shift-scan"},
                                {"i", args.symbol_i},
                                {"j", j_symbol},
                                {"mode", args.mode},
                                {"fixed_value", args.value},
                                {"grid", scan_cfg.grid},
                                {"scale", args.scale},
                                {"window", window_spec(window)},
                                {"estimator", args.est.describe()},
                                {"points", points},
                                {"outputs", outputs}});
    return 0;
}

struct DecomposeArgs {
    CommonOpts common;
    EstimatorOpts est;
    std::string symbol_i;
    std::string symbol_j;
    std::int32_t tau_prime = 40;
    std::uint64_t baseline_seed = 1;
};

int run_decompose(const DecomposeArgs& args) {
    const auto window = effective_window(args.common);
    const std::string j_symbol =
        args.symbol_j.empty() ? args.symbol_i : args.symbol_j;
    const auto cfg = args.est.config(args.common);

    const auto series_i = load_series(args.common, args.symbol_i, window);
    const auto series_j = args.symbol_i == j_symbol
                              ? StockSeries{}
                              : load_series(args.common, j_symbol, window);
    const auto& signs = args.symbol_i == j_symbol ? series_i.signs : series_j.signs;

    auto decomposition =
        decompose_response(series_i.mids, signs, args.tau_prime, cfg);
    auto baseline =
        shuffled_sign_baseline(series_i.mids, signs, cfg, args.baseline_seed);
    for (ResponseCurve* curve :
         {&decomposition.short_curve, &decomposition.long_curve,
          &decomposition.original, &baseline}) {
        curve->meta.symbol_i = args.symbol_i;
        curve->meta.symbol_j = j_symbol;
    }

    // One table mirroring the five-curve comparison: the original response,
    // its two components, their sum, and the shuffled-sign null.
    std::ostringstream table;
    table << "# tau_prime=" << args.tau_prime << " i=" << args.symbol_i
          << " j=" << j_symbol
          << " returns=" << return_kind_name(cfg.return_kind) << '\n';
    table << "tau,short,long,sum,original,baseline,residual\n";
    const auto& lags = decomposition.original.lags;
    for (std::size_t li = 0; li < lags.size(); ++li) {
        const double s = decomposition.short_curve.values[li];
        const double l = decomposition.long_curve.values[li];
        table << lags[li] << ',' << format_double(s) << ',' << format_double(l)
              << ',' << format_double(s + l) << ','
              << format_double(decomposition.original.values[li]) << ','
              << format_double(baseline.values[li]) << ','
              << format_double(decomposition.residual[li]) << '\n';
    }

    const fs::path root(args.common.out);
    json outputs = json::array();
    const std::string stem =
        "decompose_" + args.symbol_i + "_" + j_symbol;
    atomic_write_file(root / (stem + ".csv"), std::move(table).str());
    outputs.push_back((root / (stem + ".csv")).string());
    write_curve_files(root, stem + "_short", decomposition.short_curve, outputs);
    write_curve_files(root, stem + "_long", decomposition.long_curve, outputs);
    write_curve_files(root, stem + "_original", decomposition.original, outputs);
    write_curve_files(root, stem + "_baseline", baseline, outputs);

    emit_manifest(args.common, {{"command", "decompose"},
                                {"i", args.symbol_i},
                                {"j", j_symbol},
                                {"tau_prime", args.tau_prime},
                                {"baseline_seed", args.baseline_seed},
                                {"window", window_spec(window)},
                                {"estimator", args.est.describe()},
                                {"outputs", outputs}});
    return 0;
}

struct SpreadArgs {
    CommonOpts common;
    EstimatorOpts est;
    std::vector<std::string> symbols;
    std::string thresholds = "0.05,0.10,0.40";
    bool with_curves = false;
    std::string scale = "physical";
};

int run_spread_groups(const SpreadArgs& args) {
    const auto window = effective_window(args.common);
    auto symbols = args.symbols;
    if (symbols.empty()) symbols = list_symbols(args.common.data);
    if (symbols.empty()) throw std::runtime_error("no symbols in dataset");

    std::vector<double> edges;
    {
        std::vector<std::string_view> parts;
        split_fields(args.thresholds, ',', parts);
        for (const auto& part : parts) {
            const auto v = parse_double(part);
            if (!v) throw std::runtime_error("bad threshold list");
            edges.push_back(*v);
        }
    }

    std::vector<StockSeries> series;
    series.reserve(symbols.size());
    std::vector<std::pair<std::string, double>> spread_table;
    for (const auto& symbol : symbols) {
        series.push_back(load_series(args.common, symbol, window));
        spread_table.emplace_back(symbol, average_spread(series.back().mids));
    }
    const auto grouping = assign_groups(spread_table, edges);

    std::ostringstream table;
    table << "symbol,avg_spread,group,out_of_range\n";
    for (const auto& a : grouping.assignments) {
        table << a.symbol << ',' << format_double(a.avg_spread) << ','
              << a.group << ',' << (a.out_of_range ? 1 : 0) << '\n';
        if (a.out_of_range)
            std::cerr << "warning: " << a.symbol << " spread "
                      << format_double(a.avg_spread)
                      << " above the top band edge; left ungrouped\n";
    }

    const fs::path root(args.common.out);
    json outputs = json::array();
    atomic_write_file(root / "spread_groups.csv", std::move(table).str());
    outputs.push_back((root / "spread_groups.csv").string());

    if (args.with_curves) {
        const auto cfg = args.est.config(args.common);
        std::vector<ResponseCurve> curves;
        curves.reserve(symbols.size());
        for (const auto& stock : series) {
            auto curve = args.scale == "trade"
                             ? response_trade_scale(stock.mids, stock.signs, cfg)
                         : args.scale == "activity"
                             ? response_activity(stock.mids, stock.signs, cfg)
                             : response_physical(stock.mids, stock.signs, cfg);
            curve.meta.symbol_i = stock.symbol;
            curve.meta.symbol_j = stock.symbol;
            curves.push_back(std::move(curve));
        }
        std::vector<std::pair<std::string, const ResponseCurve*>> by_stock;
        for (std::size_t i = 0; i < symbols.size(); ++i)
            by_stock.emplace_back(symbols[i], &curves[i]);
        const auto bands = group_average_response(by_stock, grouping);
        for (std::size_t b = 0; b < bands.size(); ++b) {
            if (!bands[b]) {
                std::cerr << "warning: spread band " << b + 1
                          << " is empty; no average curve\n";
                continue;
            }
            write_curve_files(root, "band_" + std::to_string(b + 1) + "_" +
                                        args.scale,
                              *bands[b], outputs);
        }
    }

    json assignments = json::array();
    for (const auto& a : grouping.assignments)
        assignments.push_back({{"symbol", a.symbol},
                               {"avg_spread", a.avg_spread},
                               {"group", a.group},
                               {"out_of_range", a.out_of_range}});
    emit_manifest(args.common, {{"command", "spread-groups"},
                                {"thresholds", edges},
                                {"window", window_spec(window)},
                                {"assignments", assignments},
                                {"outputs", outputs}});
    return 0;
}

struct DiagnoseArgs {
    CommonOpts common;
    std::string symbol;
};

int run_diagnose(const DiagnoseArgs& args) {
    const auto window = effective_window(args.common);
    const auto events = load_stock_events(args.common.data, args.symbol);

    std::ostringstream table;
    table << "day,last_vs_mean_midpoint\n";
    double total = 0.0;
    std::size_t days = 0;
    for (std::size_t d = 0; d < events.days.size(); ++d) {
        const auto filtered = filter_market_time(events.quotes[d], window);
        if (filtered.empty()) continue;
        const double value = midpoint_sampling_diagnostic(filtered);
        table << events.days[d].iso() << ',' << format_double(value) << '\n';
        total += value;
        ++days;
    }
    if (days == 0) throw std::runtime_error("no quote data in window");
    const double mean = total / static_cast<double>(days);

    const fs::path root(args.common.out);
    const auto path = root / ("diagnose_" + args.symbol + ".csv");
    atomic_write_file(path, std::move(table).str());

    emit_manifest(args.common,
                  {{"command", "diagnose"},
                   {"symbol", args.symbol},
                   {"window", window_spec(window)},
                   {"days", days},
                   {"mean_last_vs_mean_midpoint", mean},
                   {"outputs", json::array({path.string()})}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"price-response analytics over tick data"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value file applied before flags ([section] per "
                   "subcommand)");

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand(
        "ingest", "validate raw quote/trade files into a dataset");
    ingest_cmd->add_option("--quotes", ingest.quotes_path, "quote file")
        ->required();
    ingest_cmd->add_option("--trades", ingest.trades_path, "trade file");
    ingest_cmd->add_option("--symbol", ingest.symbol, "stock symbol")
        ->required();
    ingest_cmd->add_option("--delimiter", ingest.delimiter, "field delimiter")
        ->capture_default_str();
    ingest_cmd->add_option("--window", ingest.window, "market window")
        ->capture_default_str();
    add_out_opt(ingest_cmd, ingest.common);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand(
        "synth", "generate a synthetic market with known ground truth");
    synth_cmd->add_option("--days", synth.params.days, "number of days")
        ->capture_default_str();
    synth_cmd
        ->add_option("--seconds", synth.params.seconds_per_day,
                     "seconds per day (0 = full window)")
        ->capture_default_str();
    synth_cmd->add_option("--p", synth.params.p_persist, "sign persistence")
        ->capture_default_str();
    synth_cmd->add_option("--lambda", synth.params.impact, "per-trade impact")
        ->capture_default_str();
    synth_cmd->add_option("--sigma", synth.params.noise_sigma, "per-second noise")
        ->capture_default_str();
    synth_cmd
        ->add_option("--trades", synth.trades_spec,
                     "trades per second: fixed:<k> or geometric:<mean>")
        ->capture_default_str();
    synth_cmd
        ->add_option("--kernel", synth.kernel_spec,
                     "impact kernel: permanent or transient:<decay>")
        ->capture_default_str();
    synth_cmd->add_option("--tick", synth.params.tick, "price tick")
        ->capture_default_str();
    synth_cmd->add_option("--spread", synth.params.base_spread, "quoted spread")
        ->capture_default_str();
    synth_cmd->add_option("--base-price", synth.params.base_price, "start price")
        ->capture_default_str();
    synth_cmd->add_option("--start-day", synth.start_day, "first day")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.params.seed, "random seed")
        ->capture_default_str();
    synth_cmd->add_option("--symbol", synth.symbol, "symbol to write")
        ->capture_default_str();
    synth_cmd->add_option("--window", synth.window, "market window")
        ->capture_default_str();
    synth_cmd->add_flag("--full-window", synth.full_window,
                        "generate the whole market window");
    add_out_opt(synth_cmd, synth.common);

    SignsArgs signs;
    auto* signs_cmd = app.add_subcommand(
        "signs", "classify trade signs and export per-day sign series");
    signs_cmd->add_option("--symbol", signs.symbol, "stock symbol")->required();
    add_data_opts(signs_cmd, signs.common);
    add_out_opt(signs_cmd, signs.common);

    ResponseArgs response;
    auto* response_cmd =
        app.add_subcommand("response", "estimate a response curve");
    response_cmd->add_option("--i", response.symbol_i, "stock whose returns")
        ->required();
    response_cmd->add_option("--j", response.symbol_j,
                             "stock whose signs (default: --i)");
    response_cmd
        ->add_option("--scale", response.scale, "trade|physical|activity")
        ->capture_default_str();
    add_estimator_opts(response_cmd, response.est);
    add_data_opts(response_cmd, response.common);
    add_out_opt(response_cmd, response.common);

    ShiftScanArgs shift;
    auto* shift_cmd = app.add_subcommand(
        "shift-scan", "scan the return/sign alignment offset");
    shift_cmd->add_option("--i", shift.symbol_i, "stock whose returns")
        ->required();
    shift_cmd->add_option("--j", shift.symbol_j, "stock whose signs");
    shift_cmd->add_option("--mode", shift.mode, "fixed-tau|fixed-shift")
        ->capture_default_str();
    shift_cmd->add_option("--value", shift.value, "the fixed tau or shift")
        ->capture_default_str();
    shift_cmd
        ->add_option("--grid", shift.grid,
                     "varied parameter grid: list or start:stop:step")
        ->required();
    shift_cmd->add_option("--scale", shift.scale, "physical|trade")
        ->capture_default_str();
    add_estimator_opts(shift_cmd, shift.est);
    add_data_opts(shift_cmd, shift.common);
    add_out_opt(shift_cmd, shift.common);

    DecomposeArgs decompose;
    auto* decompose_cmd = app.add_subcommand(
        "decompose", "short/long split at a pivot lag plus shuffled baseline");
    decompose_cmd->add_option("--i", decompose.symbol_i, "stock whose returns")
        ->required();
    decompose_cmd->add_option("--j", decompose.symbol_j, "stock whose signs");
    decompose_cmd
        ->add_option("--tau-prime", decompose.tau_prime, "pivot lag")
        ->capture_default_str();
    decompose_cmd
        ->add_option("--baseline-seed", decompose.baseline_seed,
                     "seed for the shuffled baseline")
        ->capture_default_str();
    add_estimator_opts(decompose_cmd, decompose.est, "logarithmic");
    add_data_opts(decompose_cmd, decompose.common);
    add_out_opt(decompose_cmd, decompose.common);

    SpreadArgs spread;
    auto* spread_cmd = app.add_subcommand(
        "spread-groups", "average spreads, band assignment, band curves");
    spread_cmd->add_option("--symbols", spread.symbols,
                           "symbols (default: every symbol in the dataset)")
        ->delimiter(',');
    spread_cmd->add_option("--thresholds", spread.thresholds, "band edges")
        ->capture_default_str();
    spread_cmd->add_flag("--curves", spread.with_curves,
                         "also emit per-band average response curves");
    spread_cmd->add_option("--scale", spread.scale,
                           "estimator for --curves: trade|physical|activity")
        ->capture_default_str();
    add_estimator_opts(spread_cmd, spread.est);
    add_data_opts(spread_cmd, spread.common);
    add_out_opt(spread_cmd, spread.common);

    DiagnoseArgs diagnose;
    auto* diagnose_cmd = app.add_subcommand(
        "diagnose", "last-of-second vs mean midpoint sampling statistic");
    diagnose_cmd->add_option("--symbol", diagnose.symbol, "stock symbol")
        ->required();
    add_data_opts(diagnose_cmd, diagnose.common);
    add_out_opt(diagnose_cmd, diagnose.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems are exit 2
    }

    try {
        if (ingest_cmd->parsed()) return run_ingest(ingest);
        if (synth_cmd->parsed()) return run_synth(synth);
        if (signs_cmd->parsed()) return run_signs(signs);
        if (response_cmd->parsed()) return run_response(response);
        if (shift_cmd->parsed()) return run_shift_scan(shift);
        if (decompose_cmd->parsed()) return run_decompose(decompose);
        if (spread_cmd->parsed()) return run_spread_groups(spread);
        if (diagnose_cmd->parsed()) return run_diagnose(diagnose);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}
