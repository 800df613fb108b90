package fixtures.dataclass.smelly;

public class CustomerRecord {
    private String name;
    private String email;
    private int age;

    public CustomerRecord(String name, String email, int age) {
        this.name = name;
        this.email = email;
        this.age = age;
    }

    public String getName() {
        return name;
    }

    public String getEmail() {
        return email;
    }

    public void setEmail(String email) {
        this.email = email;
    }
}

class CustomerMailer {
    private int sent;

    String compose(CustomerRecord record) {
        sent++;
        record.setEmail("mail-" + sent + "@example.org");
        return "Dear " + record.getName();
    }
}
