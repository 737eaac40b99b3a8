#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "psc/psccli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"psc: local test of symmetric criticality"};
  std::string command, file, format = "text", out_path;
  std::vector<std::string> sets;
  std::optional<int> degree;
  bool timings = false;
  app.add_option("command", command, "check-psc, cohomology, condition2, reduce or compare")->required();
  app.add_option("problem", file, "problem file (JSON)")->required();
  app.add_option("--set", sets, "parameter substitution name=value (repeatable)");
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--degree", degree, "cohomology degree override");
  app.add_option("--out", out_path, "write the report to a file");
  app.add_flag("--timings", timings, "record stage timings in the report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (!psc::is_command(command)) {
    std::cerr << "psc: unknown command '" << command << "'\n";
    return 2;
  }
  std::vector<std::pair<std::string, std::string>> assignments;
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "psc: --set expects name=value, got '" << s << "'\n";
      return 2;
    }
    assignments.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  try {
    const psc::ProblemSpec spec = psc::load_problem(file, assignments);
    psc::RunOptions opt;
    opt.degree = degree;
    opt.timings = timings;
    const auto report = psc::run(command, spec, opt);
    const std::string text = format == "json" ? report.dump(2) + "\n" : psc::render_text(report);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream o(out_path, std::ios::binary);
      if (!(o << text)) {
        std::cerr << "psc: cannot write " << out_path << "\n";
        return 1;
      }
    }
  } catch (const psc::ProblemError& e) {
    std::cerr << "psc: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "psc: computation failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
