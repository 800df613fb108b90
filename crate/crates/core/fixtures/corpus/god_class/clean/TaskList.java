package fixtures.godclass.clean;

import java.util.ArrayList;
import java.util.List;

public class TaskList {
    private final List<String> tasks = new ArrayList<>();
    private int completed;

    public void add(String task) {
        if (!tasks.contains(task)) {
            tasks.add(task);
        }
    }

    public boolean complete(String task) {
        if (tasks.remove(task)) {
            completed++;
            return true;
        }
        return false;
    }

    public double progress() {
        int total = tasks.size() + completed;
        return total == 0 ? 1.0 : (double) completed / total;
    }
}
