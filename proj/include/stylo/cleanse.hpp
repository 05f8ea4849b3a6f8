#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace stylo {

struct FileEntry {
  std::string path;      // relative within the repository
  std::string hash;      // lowercase hex content digest (sha-256)
  std::uint64_t size = 0;
  std::string language;  // guessed from the extension
};

struct RepoRecord {
  std::string repo_id;
  std::string owner_type;  // "user" | "organization"
  bool is_fork = false;
  int created_at = 0;  // calendar year
  int contributor_count = 1;
  std::vector<FileEntry> files;
};

struct YearWindow {
  int first = 0;
  int last = 0;  // inclusive
};

struct CleanseReport {
  // initial cleanup
  std::size_t input_repos = 0;
  std::size_t removed_organization = 0;
  std::size_t removed_fork = 0;
  std::size_t removed_duplicate_repo = 0;
  std::size_t removed_duplicate_files = 0;
  std::size_t after_initial = 0;
  // temporal segmentation
  std::map<int, std::size_t> year_buckets;
  std::vector<std::string> quarantined;  // out-of-range years, never fatal
  std::size_t out_of_window = 0;
  std::size_t selected = 0;
  // spatial segmentation
  std::size_t removed_multi_contributor = 0;
  std::size_t removed_third_party_files = 0;
  std::size_t output_repos = 0;
  std::size_t output_files = 0;
};

// Step 1: drop organization accounts, forks, duplicate repositories
// (identical file-hash multisets; the earliest created_at survives, ties by
// repo id) and duplicate files across survivors (first seen in canonical
// repo order wins).
std::vector<RepoRecord> initial_cleanup(std::vector<RepoRecord> records,
                                        CleanseReport& report);

// Step 2: bucket by creation year and select the window. Records outside
// [2000, max_valid_year] are quarantined; out-of-window records stay in
// their buckets but are not selected.
std::vector<RepoRecord> temporal_segment(const std::vector<RepoRecord>& records,
                                         YearWindow window, int max_valid_year,
                                         CleanseReport& report);

// Step 3: drop multi-contributor repositories and files whose path contains
// a listed third-party name as a path segment (case-insensitive).
std::vector<RepoRecord> spatial_segment(std::vector<RepoRecord> records,
                                        const std::set<std::string>& third_party,
                                        CleanseReport& report);

struct CleanseResult {
  std::vector<RepoRecord> records;
  CleanseReport report;
};

CleanseResult cleanse_pipeline(std::vector<RepoRecord> records, YearWindow window,
                               const std::set<std::string>& third_party,
                               int max_valid_year);

// Manifest: one JSON record per line. Writing is canonical (records sorted
// by created_at then repo id) so equal record sets serialize identically.
std::vector<RepoRecord> read_manifest(const std::string& path);
void write_manifest(const std::vector<RepoRecord>& records, const std::string& path);

// Third-party list: one name per line, '#' comments.
std::set<std::string> read_third_party_list(const std::string& path);

// Fills empty file hashes by digesting `<root>/<repo_id>/<path>`.
void fill_hashes_from_tree(std::vector<RepoRecord>& records, const std::string& root,
                           std::size_t jobs = 1);

std::string render_cleanse_report(const CleanseReport& report);

}  // namespace stylo
