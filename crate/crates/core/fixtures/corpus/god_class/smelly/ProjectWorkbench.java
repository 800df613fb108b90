package fixtures.godclass.smelly;

import java.util.ArrayList;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

/**
 * Holds tasks, renders them, persists them, schedules them and notifies
 * people about them.
 */
public class ProjectWorkbench {
    private final List<String> tasks = new ArrayList<>();
    private final Map<String, Integer> estimates = new HashMap<>();
    private final Map<String, String> owners = new HashMap<>();
    private final List<String> outbox = new ArrayList<>();
    private final StringBuilder canvas = new StringBuilder();
    private String storagePath;
    private int weekCapacity;
    private boolean dirty;

    public ProjectWorkbench(String storagePath, int weekCapacity) {
        this.storagePath = storagePath;
        this.weekCapacity = weekCapacity;
    }

    public void addTask(String name, int estimate) {
        if (name == null || name.isEmpty()) {
            throw new IllegalArgumentException("task name required");
        }
        tasks.add(name);
        estimates.put(name, estimate);
        dirty = true;
    }

    public void removeTask(String name) {
        tasks.remove(name);
        estimates.remove(name);
        owners.remove(name);
        dirty = true;
    }

    public void assign(String name, String owner) {
        if (!tasks.contains(name)) {
            return;
        }
        owners.put(name, owner);
        outbox.add(owner + ": you now own " + name);
        dirty = true;
    }

    public int totalEstimate() {
        int total = 0;
        for (String task : tasks) {
            Integer value = estimates.get(task);
            if (value != null) {
                total += value;
            }
        }
        return total;
    }

    public int weeksNeeded() {
        int total = totalEstimate();
        if (weekCapacity <= 0) {
            return -1;
        }
        int weeks = total / weekCapacity;
        if (total % weekCapacity != 0) {
            weeks++;
        }
        return weeks;
    }

    public List<String> unassigned() {
        List<String> result = new ArrayList<>();
        for (String task : tasks) {
            if (!owners.containsKey(task)) {
                result.add(task);
            }
        }
        return result;
    }

    public String renderBoard() {
        canvas.setLength(0);
        canvas.append("== Board ==\n");
        for (String task : tasks) {
            canvas.append(renderRow(task));
            canvas.append('\n');
        }
        canvas.append("total: ").append(totalEstimate());
        return canvas.toString();
    }

    private String renderRow(String task) {
        String owner = owners.get(task);
        Integer estimate = estimates.get(task);
        String left = pad(task, 24);
        String middle = owner == null ? "-" : owner;
        return left + " | " + pad(middle, 12) + " | " + estimate;
    }

    private String pad(String text, int width) {
        StringBuilder padded = new StringBuilder(text);
        while (padded.length() < width) {
            padded.append(' ');
        }
        return padded.toString();
    }

    public String serialize() {
        StringBuilder out = new StringBuilder();
        for (String task : tasks) {
            out.append(task).append(';');
            out.append(estimates.get(task)).append(';');
            out.append(owners.getOrDefault(task, "")).append('\n');
        }
        return out.toString();
    }

    public void load(String content) {
        tasks.clear();
        estimates.clear();
        owners.clear();
        for (String line : content.split("\n")) {
            String[] parts = line.split(";");
            if (parts.length < 2) {
                continue;
            }
            tasks.add(parts[0]);
            estimates.put(parts[0], Integer.parseInt(parts[1]));
            if (parts.length > 2 && !parts[2].isEmpty()) {
                owners.put(parts[0], parts[2]);
            }
        }
        dirty = false;
    }

    public boolean needsSave() {
        return dirty && storagePath != null;
    }

    public void markSaved() {
        dirty = false;
        outbox.add("saved to " + storagePath);
    }

    public List<String> drainNotifications() {
        List<String> drained = new ArrayList<>(outbox);
        outbox.clear();
        return drained;
    }

    public void notifyOverdue(List<String> overdue) {
        for (String task : overdue) {
            String owner = owners.get(task);
            if (owner != null) {
                outbox.add(owner + ": " + task + " is overdue");
            } else {
                outbox.add("nobody owns overdue task " + task);
            }
        }
    }

    public Map<String, Integer> loadByOwner() {
        Map<String, Integer> load = new HashMap<>();
        for (String task : tasks) {
            String owner = owners.get(task);
            if (owner == null) {
                continue;
            }
            int current = load.getOrDefault(owner, 0);
            load.put(owner, current + estimates.getOrDefault(task, 0));
        }
        return load;
    }

    public String busiestOwner() {
        String busiest = null;
        int max = -1;
        for (Map.Entry<String, Integer> entry : loadByOwner().entrySet()) {
            if (entry.getValue() > max) {
                max = entry.getValue();
                busiest = entry.getKey();
            }
        }
        return busiest;
    }

    public void rebalance() {
        String busiest = busiestOwner();
        List<String> free = unassigned();
        if (busiest == null || free.isEmpty()) {
            return;
        }
        for (String task : tasks) {
            if (busiest.equals(owners.get(task)) && !free.isEmpty()) {
                owners.remove(task);
                outbox.add(busiest + ": released " + task);
                break;
            }
        }
        dirty = true;
    }

    public void changeCapacity(int capacity) {
        if (capacity < 0) {
            throw new IllegalArgumentException("negative capacity");
        }
        weekCapacity = capacity;
        outbox.add("capacity is now " + capacity);
    }

    public String summary() {
        return tasks.size() + " tasks, " + totalEstimate() + " points, "
                + weeksNeeded() + " weeks, " + unassigned().size() + " unassigned";
    }
}
