#include "cluekit/io.hpp"

#include <fstream>

namespace cluekit {

nlohmann::json function_to_json(const FunctionTable& f) {
  nlohmann::json doc;
  doc["n"] = f.n();
  doc["q"] = f.q();
  doc["measure"] = f.space().measures();
  doc["values"] = std::vector<double>(f.values().begin(), f.values().end());
  return doc;
}

FunctionTable function_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    const int q = doc.at("q").get<int>();
    auto measure = doc.at("measure").get<std::vector<std::vector<double>>>();
    auto values = doc.at("values").get<std::vector<double>>();
    ProductSpace space(n, q, std::move(measure));
    if (values.size() != space.config_count()) {
      throw ParseError("function file: expected " + std::to_string(space.config_count()) +
                       " values, got " + std::to_string(values.size()));
    }
    return FunctionTable(std::move(space), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("function file: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("function file: ") + e.what());
  }
}

FunctionTable read_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open function file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("function file " + path + ": " + e.what());
  }
  return function_from_json(doc);
}

void write_function_file(const std::string& path, const FunctionTable& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write function file: " + path);
  out << function_to_json(f).dump() << '\n';
}

}  // namespace cluekit
