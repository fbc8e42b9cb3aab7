#ifndef GEOFLOW_CORPUS_HPP
#define GEOFLOW_CORPUS_HPP

#include <optional>
#include <string>
#include <vector>

namespace geoflow {

// Bundled example files. Aliases point at an object inside another entry.
struct CorpusEntry {
    std::string name;
    std::string kind; // "metric", "objects" or "alias"
    std::string description;
    std::string content;      // JSON text for metric/objects entries
    std::string aliasMetric;  // alias target entry
    std::string aliasObject;  // named object inside the target
};

const std::vector<CorpusEntry>& corpusEntries();
std::optional<CorpusEntry> corpusFind(const std::string& name);
std::string corpusListText();

} // namespace geoflow

#endif
