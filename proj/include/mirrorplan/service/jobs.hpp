#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdio>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mirrorplan/io/config.hpp"
#include "mirrorplan/io/run_outputs.hpp"

namespace mirrorplan::service {

enum class JobState { queued, running, done, failed };

constexpr const char* to_string(JobState s) noexcept {
    switch (s) {
        case JobState::queued: return "queued";
        case JobState::running: return "running";
        case JobState::done: return "done";
        case JobState::failed: return "failed";
    }
    return "unknown";
}

/// Point-in-time copy of a job's public record.
struct JobSnapshot {
    std::string id;
    JobState state = JobState::queued;
    std::size_t progress = 0;  // iterations completed
    std::size_t iterations = 0;
    std::string error;
    std::shared_ptr<const io::RunResult> result;  // set once done
};

/**
 * In-memory job registry with a fixed pool of workers. At most
 * `max_concurrent` runs execute at once; the rest wait in FIFO order.
 * State only moves forward: queued -> running -> done | failed.
 */
class JobRegistry {
public:
    explicit JobRegistry(std::size_t max_concurrent = 2, std::optional<std::filesystem::path> write_through = {})
        : write_through_(std::move(write_through)) {
        if (max_concurrent == 0) throw std::invalid_argument("max_concurrent must be positive");
        for (std::size_t i = 0; i < max_concurrent; ++i) workers_.emplace_back([this] { work(); });
    }

    JobRegistry(const JobRegistry&) = delete;
    JobRegistry& operator=(const JobRegistry&) = delete;

    ~JobRegistry() {
        {
            std::lock_guard lock(mutex_);
            stopping_ = true;
        }
        wake_.notify_all();
        for (auto& w : workers_) w.join();
    }

    /// Queue a validated config; returns the job id.
    std::string submit(io::RunConfig cfg) {
        cfg.validate();
        std::lock_guard lock(mutex_);
        char id[32];
        std::snprintf(id, sizeof id, "job-%06zu", ++counter_);
        auto job = std::make_shared<Job>();
        job->snapshot.id = id;
        job->snapshot.iterations = cfg.hs.iterations;
        job->config = std::move(cfg);
        jobs_.emplace(id, job);
        queue_.push_back(job);
        wake_.notify_one();
        return id;
    }

    std::optional<JobSnapshot> get(const std::string& id) const {
        std::lock_guard lock(mutex_);
        const auto it = jobs_.find(id);
        if (it == jobs_.end()) return std::nullopt;
        JobSnapshot s = it->second->snapshot;
        s.progress = it->second->progress.load();
        return s;
    }

    /// Number of jobs currently executing.
    std::size_t running() const {
        std::lock_guard lock(mutex_);
        return running_;
    }

private:
    struct Job {
        JobSnapshot snapshot;
        io::RunConfig config;
        std::atomic<std::size_t> progress{0};
    };

    struct Stopping {};

    void work() {
        for (;;) {
            std::shared_ptr<Job> job;
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
                if (stopping_) return;
                job = queue_.front();
                queue_.pop_front();
                job->snapshot.state = JobState::running;
                ++running_;
            }
            std::shared_ptr<const io::RunResult> result;
            std::string error;
            try {
                auto r = io::execute_run(job->config, [&](std::size_t done) {
                    job->progress.store(done);
                    std::lock_guard lock(mutex_);
                    if (stopping_) throw Stopping{};
                });
                if (write_through_) io::write_outputs(*write_through_ / job->snapshot.id, r);
                result = std::make_shared<const io::RunResult>(std::move(r));
            } catch (const Stopping&) {
                error = "service shutting down";
            } catch (const std::exception& e) {
                error = e.what();
            }
            std::lock_guard lock(mutex_);
            --running_;
            if (result) {
                job->snapshot.result = std::move(result);
                job->snapshot.state = JobState::done;
            } else {
                job->snapshot.error = error;
                job->snapshot.state = JobState::failed;
            }
        }
    }

    std::optional<std::filesystem::path> write_through_;
    mutable std::mutex mutex_;
    std::condition_variable wake_;
    std::map<std::string, std::shared_ptr<Job>> jobs_;
    std::deque<std::shared_ptr<Job>> queue_;
    std::vector<std::thread> workers_;
    std::size_t counter_ = 0;
    std::size_t running_ = 0;
    bool stopping_ = false;
};

}  // namespace mirrorplan::service
