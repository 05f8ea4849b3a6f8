#include "stylo/cleanse.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "stylo/sha256.hpp"
#include "stylo/text.hpp"

namespace stylo {

namespace {

using nlohmann::json;

bool repo_order(const RepoRecord& a, const RepoRecord& b) {
  if (a.created_at != b.created_at) return a.created_at < b.created_at;
  return a.repo_id < b.repo_id;
}

std::string hash_multiset_key(const RepoRecord& r) {
  std::vector<std::string> hashes;
  hashes.reserve(r.files.size());
  for (const auto& f : r.files) hashes.push_back(f.hash);
  std::sort(hashes.begin(), hashes.end());
  std::string key;
  for (const auto& h : hashes) {
    key += h;
    key += '\n';
  }
  return key;
}

}  // namespace

std::vector<RepoRecord> initial_cleanup(std::vector<RepoRecord> records,
                                        CleanseReport& report) {
  report.input_repos = records.size();

  std::vector<RepoRecord> kept;
  kept.reserve(records.size());
  for (auto& r : records) {
    if (r.owner_type == "organization") {
      ++report.removed_organization;
    } else if (r.is_fork) {
      ++report.removed_fork;
    } else {
      kept.push_back(std::move(r));
    }
  }

  // duplicate repositories: identical file-hash multisets; keep the earliest
  std::sort(kept.begin(), kept.end(), repo_order);
  std::set<std::string> seen_keys;
  std::vector<RepoRecord> unique;
  unique.reserve(kept.size());
  for (auto& r : kept) {
    std::string key = hash_multiset_key(r);
    if (seen_keys.count(key)) {
      ++report.removed_duplicate_repo;
    } else {
      seen_keys.insert(key);
      unique.push_back(std::move(r));
    }
  }

  // duplicate files across the survivor set, canonical order
  std::set<std::string> seen_hashes;
  for (auto& r : unique) {
    std::vector<FileEntry> files;
    files.reserve(r.files.size());
    for (auto& f : r.files) {
      if (seen_hashes.count(f.hash)) {
        ++report.removed_duplicate_files;
      } else {
        seen_hashes.insert(f.hash);
        files.push_back(std::move(f));
      }
    }
    r.files = std::move(files);
  }

  report.after_initial = unique.size();
  return unique;
}

std::vector<RepoRecord> temporal_segment(const std::vector<RepoRecord>& records,
                                         YearWindow window, int max_valid_year,
                                         CleanseReport& report) {
  std::vector<RepoRecord> selected;
  for (const auto& r : records) {
    if (r.created_at < 2000 || r.created_at > max_valid_year) {
      report.quarantined.push_back(r.repo_id);
      continue;
    }
    report.year_buckets[r.created_at] += 1;
    if (r.created_at >= window.first && r.created_at <= window.last) {
      selected.push_back(r);
    } else {
      ++report.out_of_window;
    }
  }
  report.selected = selected.size();
  return selected;
}

std::vector<RepoRecord> spatial_segment(std::vector<RepoRecord> records,
                                        const std::set<std::string>& third_party,
                                        CleanseReport& report) {
  std::vector<RepoRecord> kept;
  kept.reserve(records.size());
  for (auto& r : records) {
    if (r.contributor_count > 1) {
      ++report.removed_multi_contributor;
      continue;
    }
    std::vector<FileEntry> files;
    files.reserve(r.files.size());
    for (auto& f : r.files) {
      bool third = false;
      for (const auto& segment : split_char(f.path, '/')) {
        if (third_party.count(lower_ascii(segment))) {
          third = true;
          break;
        }
      }
      if (third) {
        ++report.removed_third_party_files;
      } else {
        files.push_back(std::move(f));
      }
    }
    r.files = std::move(files);
    kept.push_back(std::move(r));
  }
  report.output_repos = kept.size();
  for (const auto& r : kept) report.output_files += r.files.size();
  return kept;
}

CleanseResult cleanse_pipeline(std::vector<RepoRecord> records, YearWindow window,
                               const std::set<std::string>& third_party,
                               int max_valid_year) {
  CleanseResult result;
  auto cleaned = initial_cleanup(std::move(records), result.report);
  auto selected = temporal_segment(cleaned, window, max_valid_year, result.report);
  result.records = spatial_segment(std::move(selected), third_party, result.report);
  return result;
}

std::vector<RepoRecord> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  std::vector<RepoRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    RepoRecord r;
    r.repo_id = j.at("repo_id").get<std::string>();
    r.owner_type = j.value("owner_type", "user");
    r.is_fork = j.value("is_fork", false);
    r.created_at = j.value("created_at", 0);
    r.contributor_count = j.value("contributor_count", 1);
    for (const auto& jf : j.value("files", json::array())) {
      FileEntry f;
      f.path = jf.at("path").get<std::string>();
      f.hash = jf.value("hash", "");
      f.size = jf.value("size", std::uint64_t(0));
      f.language = jf.value("language", "");
      r.files.push_back(std::move(f));
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_manifest(const std::vector<RepoRecord>& records, const std::string& path) {
  std::vector<const RepoRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const RepoRecord* a, const RepoRecord* b) { return repo_order(*a, *b); });
  std::ostringstream out;
  for (const RepoRecord* r : ordered) {
    json j;
    j["repo_id"] = r->repo_id;
    j["owner_type"] = r->owner_type;
    j["is_fork"] = r->is_fork;
    j["created_at"] = r->created_at;
    j["contributor_count"] = r->contributor_count;
    json files = json::array();
    for (const auto& f : r->files) {
      files.push_back({{"path", f.path},
                       {"hash", f.hash},
                       {"size", f.size},
                       {"language", f.language}});
    }
    j["files"] = std::move(files);
    out << j.dump() << "\n";
  }
  write_file(path, out.str());
}

std::set<std::string> read_third_party_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open third-party list: " + path);
  std::set<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    names.insert(lower_ascii(line.substr(b, e - b + 1)));
  }
  return names;
}

void fill_hashes_from_tree(std::vector<RepoRecord>& records, const std::string& root,
                           std::size_t jobs) {
  std::vector<FileEntry*> todo;
  std::vector<std::string> paths;
  for (auto& r : records) {
    for (auto& f : r.files) {
      if (f.hash.empty()) {
        todo.push_back(&f);
        paths.push_back(root + "/" + r.repo_id + "/" + f.path);
      }
    }
  }
  if (jobs == 0) jobs = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      std::string content = read_file(paths[i]);
      todo[i]->hash = sha256_hex(content);
      todo[i]->size = content.size();
    }
  };
  if (jobs <= 1 || todo.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(jobs, todo.size()); ++j) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) t.join();
  }
}

std::string render_cleanse_report(const CleanseReport& r) {
  std::ostringstream out;
  out << "initial cleanup\n";
  out << "  input repos           " << r.input_repos << "\n";
  out << "  removed organization  " << r.removed_organization << "\n";
  out << "  removed fork          " << r.removed_fork << "\n";
  out << "  removed duplicate     " << r.removed_duplicate_repo << "\n";
  out << "  removed dup files     " << r.removed_duplicate_files << "\n";
  out << "  survivors             " << r.after_initial << "\n";
  out << "temporal segmentation\n";
  for (const auto& [year, n] : r.year_buckets) {
    out << "  " << year << "  " << n << "\n";
  }
  out << "  buckets               " << r.year_buckets.size() << "\n";
  out << "  quarantined           " << r.quarantined.size() << "\n";
  out << "  out of window         " << r.out_of_window << "\n";
  out << "  selected              " << r.selected << "\n";
  out << "spatial segmentation\n";
  out << "  removed multi-contrib " << r.removed_multi_contributor << "\n";
  out << "  removed 3rd-party     " << r.removed_third_party_files << "\n";
  out << "  output repos          " << r.output_repos << "\n";
  out << "  output files          " << r.output_files << "\n";
  return out.str();
}

}  // namespace stylo
