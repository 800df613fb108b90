package fixtures.primitives.smelly;

public class CustomerProfile {
    private String firstName;
    private String lastName;
    private String street;
    private String city;
    private String zipCode;
    private int birthYear;
    private int birthMonth;

    public String fullName() {
        return firstName + " " + lastName;
    }

    public String mailingLabel() {
        return fullName() + "\n" + street + "\n" + zipCode + " " + city;
    }

    public int ageIn(int year, int month) {
        return month < birthMonth ? year - birthYear - 1 : year - birthYear;
    }

    public void relocate(String newStreet, String newCity, String newZipCode) {
        street = newStreet;
        city = newCity;
        zipCode = newZipCode;
    }
}
