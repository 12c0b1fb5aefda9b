#include "kst/git.hpp"
#include "kst/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace kst;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2 };

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

// "0,0;1,1;1,-1" -> one weight vector per coordinate.
TorusAction parse_action(const std::string& weights, const std::string& names) {
    TorusAction a;
    for (const auto& w : split(weights, ';')) {
        std::vector<long> v;
        for (const auto& x : split(w, ',')) v.push_back(std::stol(x));
        a.weights.push_back(v);
    }
    if (names.empty()) {
        for (std::size_t i = 0; i < a.weights.size(); ++i) a.coords.push_back("x" + std::to_string(i));
    } else {
        a.coords = split(names, ',');
    }
    a.validate();
    return a;
}

Support parse_support(const TorusAction& a, const std::string& s) {
    Support out;
    for (const auto& tok : split(s, ',')) {
        bool numeric = !tok.empty() && tok.find_first_not_of("0123456789") == std::string::npos;
        out.push_back(numeric ? std::stoul(tok) : a.index(tok));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void emit(const Report& r, const std::string& format, bool trace) {
    if (format == "json")
        std::cout << to_json(r).dump(2) << "\n";
    else
        std::cout << render_table(r, trace);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verifier for K-stability computations"};
    app.require_subcommand(1);

    std::string file, dir, out, format = "table", weights, names, support;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool trace = false;

    auto* run = app.add_subcommand("run", "Run one scenario file");
    run->add_option("file", file, "Scenario file")->required();
    run->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));
    run->add_flag("--trace", trace, "Print derivation traces");

    auto* all = app.add_subcommand("verify-all", "Run every scenario in a directory");
    all->add_option("dir", dir, "Scenario directory")->required();
    all->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    all->add_option("--out", out, "Write the machine-readable report here");
    all->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));
    all->add_flag("--trace", trace, "Print derivation traces");

    auto* git = app.add_subcommand("git", "Torus GIT utilities");
    git->require_subcommand(1);
    auto* cls = git->add_subcommand("classify", "Classify one support");
    cls->add_option("--weights", weights, "Weight vectors, e.g. \"0,0;1,1;1,-1;-1,1;-1,-1\"")->required();
    cls->add_option("--names", names, "Coordinate names, comma separated");
    cls->add_option("--support", support, "Nonzero coordinates (names or indices), comma separated")->required();

    auto* rep = app.add_subcommand("report", "Render a saved report or a scenario directory");
    rep->add_option("path", file, "Report JSON or scenario directory")->required();
    rep->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));
    rep->add_option("--threads", threads)->check(CLI::PositiveNumber);
    rep->add_flag("--trace", trace);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) {
            Report r;
            r.results.push_back(run_scenario(load_scenario(file)));
            emit(r, format, trace);
            return r.ok() ? kOk : kMismatch;
        }
        if (*all) {
            Report r = verify_all(dir, threads);
            if (!out.empty()) {
                std::ofstream o(out);
                if (!o) throw SchemaError("cannot write '" + out + "'");
                o << to_json(r).dump(2) << "\n";
            }
            emit(r, format, trace);
            return r.ok() ? kOk : kMismatch;
        }
        if (*cls) {
            auto a = parse_action(weights, names);
            auto s = parse_support(a, support);
            std::cout << support_name(a, s) << " " << to_string(classify(a, s)) << "\n";
            return kOk;
        }
        if (*rep) {
            Report r;
            if (std::filesystem::is_directory(file)) {
                r = verify_all(file, threads);
            } else {
                std::ifstream in(file);
                if (!in) throw SchemaError("cannot open '" + file + "'");
                r = report_from_json(json::parse(in));
            }
            emit(r, format, trace);
            return r.ok() ? kOk : kMismatch;
        }
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMismatch;
    }
    return kUsage;
}
