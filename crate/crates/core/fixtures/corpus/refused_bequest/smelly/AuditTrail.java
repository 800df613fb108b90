package fixtures.bequest.smelly;

import java.util.ArrayList;
import java.util.List;

class BaseRepository {
    protected final List<String> records = new ArrayList<>();

    public void saveRecord(String record) {
        if (!records.contains(record)) {
            records.add(record);
        }
    }

    public void deleteRecord(String record) {
        records.remove(record);
    }

    public List<String> listRecords() {
        return new ArrayList<>(records);
    }

    public int countRecords() {
        return records.size();
    }
}

public class AuditTrail extends BaseRepository {
    private final List<String> events = new ArrayList<>();

    public void recordEvent(String event) {
        events.add(System.currentTimeMillis() + " " + event);
    }

    @Override
    public void deleteRecord(String record) {
        throw new UnsupportedOperationException("audit records are immutable");
    }
}
