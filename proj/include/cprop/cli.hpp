#pragma once

// Command-line driver.
//
//   cprop --algo {hyperarc|ac3|path|pc2|dac|dpc} [--order v1,v2,...]
//         [--stats] [--verify] [--format {text|tsv}] <input.csp>
//
// The result is printed as a complete document (var lines, then con lines),
// so any output can be fed back in as input. Exit status: 0 on success, 1
// when the result contains an empty domain or an empty constraint, 2 on
// usage, input, or verification errors. Path-based algorithms standardize
// the input first; dac and dpc require an explicit --order, while the other
// algorithms ignore it.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cprop/arc.hpp"
#include "cprop/csp.hpp"
#include "cprop/directional.hpp"
#include "cprop/engine.hpp"
#include "cprop/errors.hpp"
#include "cprop/path.hpp"
#include "cprop/text.hpp"

namespace cprop {

namespace cli_detail {

inline int usage(std::ostream& err, const std::string& message) {
  if (!message.empty()) err << "error: " << message << "\n";
  err << "usage: cprop --algo {hyperarc|ac3|path|pc2|dac|dpc} [--order v1,v2,...]\n"
         "             [--stats] [--verify] [--format {text|tsv}] <input.csp>\n";
  return 2;
}

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

inline bool inconsistent(const Csp& p) {
  for (const AtomSet& d : p.domains)
    if (d.empty()) return true;
  for (const Constraint& c : p.constraints)
    if (c.tuples.empty()) return true;
  return false;
}

}  // namespace cli_detail

inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  std::string algo, input, order_csv, format = "text";
  bool want_stats = false, verify = false, have_order = false, have_input = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    auto value = [&](const char* flag) -> const std::string& {
      if (i + 1 >= args.size()) throw ConfigError(std::string(flag) + " needs a value");
      return args[++i];
    };
    try {
      if (a == "--algo") {
        algo = value("--algo");
      } else if (a == "--order") {
        order_csv = value("--order");
        have_order = true;
      } else if (a == "--format") {
        format = value("--format");
      } else if (a == "--stats") {
        want_stats = true;
      } else if (a == "--verify") {
        verify = true;
      } else if (a == "--help" || a == "-h") {
        cli_detail::usage(out, "");
        return 0;
      } else if (a.size() >= 2 && a[0] == '-' && a[1] == '-') {
        return cli_detail::usage(err, "unknown flag: " + a);
      } else if (!have_input) {
        input = a;
        have_input = true;
      } else {
        return cli_detail::usage(err, "unexpected argument: " + a);
      }
    } catch (const ConfigError& e) {
      return cli_detail::usage(err, e.what());
    }
  }
  bool domain_algo = algo == "hyperarc" || algo == "ac3" || algo == "dac";
  bool relation_algo = algo == "path" || algo == "pc2" || algo == "dpc";
  if (algo.empty()) return cli_detail::usage(err, "--algo is required");
  if (!domain_algo && !relation_algo) return cli_detail::usage(err, "unknown algorithm: " + algo);
  if (!have_input) return cli_detail::usage(err, "an input file is required");
  if (format != "text" && format != "tsv")
    return cli_detail::usage(err, "unknown format: " + format);
  if ((algo == "dac" || algo == "dpc") && !have_order)
    return cli_detail::usage(err, "--order is required for --algo " + algo);

  std::ifstream file(input);
  if (!file) {
    err << "error: cannot read " << input << "\n";
    return 2;
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();

  try {
    Csp p = parse_csp(buffer.str());
    p.validate();
    RunOptions opts;
    opts.verify = verify;
    Csp result;
    RunStats stats;
    if (algo == "hyperarc") {
      std::tie(result, stats) = hyper_arc(p, opts);
    } else if (algo == "ac3") {
      std::tie(result, stats) = ac3(p, opts);
    } else if (algo == "path") {
      std::tie(result, stats) = path(standardize(p), opts);
    } else if (algo == "pc2") {
      std::tie(result, stats) = pc2(standardize(p), opts);
    } else {
      VariableOrder ord{cli_detail::split_csv(order_csv)};
      result = algo == "dac" ? dac(standardize(p), ord, &stats, opts)
                             : dpc(standardize(p), ord, &stats, opts);
    }
    out << print_csp(result);
    if (want_stats) {
      if (format == "tsv") {
        out << "applications\tadditions\tpeak\n"
            << stats.applications << '\t' << stats.additions << '\t' << stats.peak << '\n';
      } else {
        out << "# stats: applications=" << stats.applications << " additions=" << stats.additions
            << " peak=" << stats.peak << '\n';
      }
    }
    return cli_detail::inconsistent(result) ? 1 : 0;
  } catch (const ParseError& e) {
    err << input << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cprop
